use std::fmt;
use std::sync::Arc;

use super::{Descriptor, FiniteGroup, Law, SubLaw};
use crate::error::{Error, Result};

/// A subgroup together with its own group view. Local index `i` of the view
/// corresponds to parent element `members[i]`; members are sorted, so local
/// index 0 is the identity.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    local: Vec<u32>,
    group: Arc<FiniteGroup>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent", &self.parent.descriptor().to_string())
            .field("order", &self.members.len())
            .finish()
    }
}

impl Subgroup {
    fn from_closed(parent: &Arc<FiniteGroup>, members: Vec<usize>) -> Subgroup {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parent.order() % members.len(), 0, "Lagrange");
        let mut local = vec![u32::MAX; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i as u32;
        }
        let law = Law::Sub(SubLaw {
            parent: parent.clone(),
            members: members.clone(),
            local: local.clone(),
        });
        let descriptor = Descriptor::Subgroup {
            parent: Box::new(parent.descriptor().clone()),
            order: members.len(),
        };
        let group = FiniteGroup::from_law(descriptor, members.len(), law).materialize_table();
        Subgroup { parent: parent.clone(), members, local, group: Arc::new(group) }
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup::from_closed(parent, (0..parent.order()).collect())
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// `[G:H]`
    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Parent index of a local element.
    #[inline]
    pub fn embed(&self, local: usize) -> usize {
        self.members[local]
    }

    /// Local index of a parent element, if it lies in the subgroup.
    #[inline]
    pub fn local_index(&self, g: usize) -> Option<usize> {
        match self.local[g] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    pub fn contains(&self, g: usize) -> bool {
        self.local[g] != u32::MAX
    }

    pub fn as_group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    /// The same subgroup seen inside `within`, which must contain it.
    pub fn relative_to(&self, within: &Subgroup) -> Result<Subgroup> {
        if !Arc::ptr_eq(&self.parent, &within.parent) {
            return Err(Error::PreconditionViolated("subgroups of different groups".into()));
        }
        let locals = self
            .members
            .iter()
            .map(|&g| within.local_index(g))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::PreconditionViolated("subgroup is not contained in the other".into()))?;
        subgroup_from_members(within.as_group(), locals)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}

/// Subgroup generated by `gens`.
pub fn subgroup_generated(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Subgroup {
    Subgroup::from_closed(parent, parent.closure(gens))
}

/// Subgroup with exactly the given members; fails if they are not closed.
pub fn subgroup_from_members(parent: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Subgroup> {
    members.sort_unstable();
    members.dedup();
    if members.first() != Some(&0) {
        return Err(Error::NotAGroup("member set lacks the identity".into()));
    }
    let mut inside = vec![false; parent.order()];
    for &m in &members {
        inside[m] = true;
    }
    let gens = {
        // a small generating set keeps the closure check linear-ish
        let mut gens = Vec::new();
        let mut covered = vec![false; parent.order()];
        covered[0] = true;
        for &m in &members {
            if !covered[m] {
                gens.push(m);
                for x in parent.closure(&gens) {
                    covered[x] = true;
                }
            }
        }
        gens
    };
    let closure = parent.closure(&gens);
    if closure.len() != members.len() || closure.iter().any(|&x| !inside[x]) {
        return Err(Error::NotAGroup("member set is not closed".into()));
    }
    Ok(Subgroup::from_closed(parent, members))
}

/// Right coset representatives `g_i` with `G = ⊔ H g_i`, smallest unused
/// index first.
pub fn right_coset_reps(parent: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut used = vec![false; parent.order()];
    let mut reps = Vec::with_capacity(h.index());
    for g in 0..parent.order() {
        if used[g] {
            continue;
        }
        reps.push(g);
        for &m in h.members() {
            used[parent.mul(m, g)] = true;
        }
    }
    reps
}
