//! Union-find over index variables. Rigid variables are named constants:
//! they bind flexible variables but never each other.

pub(crate) type VarId = usize;

#[derive(Debug, Clone, Default)]
pub(crate) struct Bindings {
    parent: Vec<VarId>,
    rigid: Vec<Option<usize>>,
}

impl Bindings {
    pub(crate) fn fresh(&mut self) -> VarId {
        let id = self.parent.len();
        self.parent.push(id);
        self.rigid.push(None);
        id
    }

    /// A variable standing for the rigid constant `name` (an index into the
    /// caller's name table).
    pub(crate) fn rigid(&mut self, name: usize) -> VarId {
        let id = self.fresh();
        self.rigid[id] = Some(name);
        id
    }

    pub(crate) fn find(&self, mut v: VarId) -> VarId {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn rigid_name(&self, v: VarId) -> Option<usize> {
        self.rigid[self.find(v)]
    }

    pub(crate) fn unify(&mut self, a: VarId, b: VarId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return true;
        }
        match (self.rigid[ra], self.rigid[rb]) {
            (Some(x), Some(y)) => x == y && {
                self.parent[rb] = ra;
                true
            },
            (None, _) => {
                self.parent[ra] = rb;
                true
            }
            (Some(_), None) => {
                self.parent[rb] = ra;
                true
            }
        }
    }

    pub(crate) fn unify_all(&mut self, a: &[VarId], b: &[VarId]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| self.unify(x, y))
    }
}
