use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How a family is produced. This is also the on-disk family document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Elementary abelian `p`-groups of rank `<= max_rank`; unbounded when absent.
    ElementaryAbelian {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_rank: Option<u32>,
    },
    /// Cyclic `p`-groups of order `<= p^max_exponent`; unbounded when absent.
    CyclicP {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_exponent: Option<u32>,
    },
    /// All abelian `p`-groups of order `<= order_bound`.
    AbelianP {
        p: u64,
        order_bound: u64,
    },
    Custom(CustomTable),
    /// Full subcategory of another family.
    Truncation {
        base: Box<FamilySpec>,
        select: Selection,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    OrderAtMost(u64),
    OrderAbove(u64),
    Classes(Vec<String>),
}

/// An explicit category table; morphism classes are taken as given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomTable {
    pub objects: Vec<CustomObject>,
    pub homs: Vec<CustomHom>,
    /// `[outer, inner, result]` meaning `outer ∘ inner = result`.
    pub compose: Vec<[String; 3]>,
    /// Identity morphism label per object label.
    pub identity: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomObject {
    pub label: String,
    pub order: u64,
    /// Invariant factors when the group is abelian.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomHom {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// The infinite N-stable kinds, which only exist through truncations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NStableKind {
    ElementaryAbelian { p: u64 },
    CyclicP { p: u64 },
}

impl NStableKind {
    /// The finite family on levels `0..=level`.
    pub fn truncation(self, level: u32) -> FamilySpec {
        match self {
            NStableKind::ElementaryAbelian { p } => FamilySpec::ElementaryAbelian {
                p,
                max_rank: Some(level),
            },
            NStableKind::CyclicP { p } => FamilySpec::CyclicP {
                p,
                max_exponent: Some(level),
            },
        }
    }

    pub fn name(self) -> String {
        match self {
            NStableKind::ElementaryAbelian { p } => format!("elementary abelian {p}-groups"),
            NStableKind::CyclicP { p } => format!("cyclic {p}-groups"),
        }
    }
}

impl FamilySpec {
    /// The N-stable kind this spec belongs to, bounded or not.
    pub fn n_stable_kind(&self) -> Option<NStableKind> {
        match *self {
            FamilySpec::ElementaryAbelian { p, .. } => Some(NStableKind::ElementaryAbelian { p }),
            FamilySpec::CyclicP { p, .. } => Some(NStableKind::CyclicP { p }),
            _ => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(
            self,
            FamilySpec::ElementaryAbelian { max_rank: None, .. }
                | FamilySpec::CyclicP {
                    max_exponent: None,
                    ..
                }
        )
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::ElementaryAbelian {
                p,
                max_rank: Some(r),
            } => {
                format!("elementary_abelian({p},{r})")
            }
            FamilySpec::ElementaryAbelian { p, max_rank: None } => {
                format!("elementary_abelian({p})")
            }
            FamilySpec::CyclicP {
                p,
                max_exponent: Some(e),
            } => format!("cyclic_p({p},{e})"),
            FamilySpec::CyclicP {
                p,
                max_exponent: None,
            } => format!("cyclic_p({p})"),
            FamilySpec::AbelianP { p, order_bound } => format!("abelian_p({p},{order_bound})"),
            FamilySpec::Custom(t) => format!("custom({} objects)", t.objects.len()),
            FamilySpec::Truncation { base, select } => {
                let sel = match select {
                    Selection::OrderAtMost(n) => format!("order<={n}"),
                    Selection::OrderAbove(n) => format!("order>{n}"),
                    Selection::Classes(c) => format!("{{{}}}", c.join(",")),
                };
                format!("{}[{}]", base.describe(), sel)
            }
        }
    }
}
