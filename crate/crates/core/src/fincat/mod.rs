//! Finite categories as total composition tables, with the constructions
//! the rest of the crate needs: functors, natural transformations, functor
//! categories, (co)products, image closure, and the (epi, strong mono)
//! factorization.

mod closure;
mod functor;
mod gamma;
mod hom;
mod iso;
mod present;

pub use closure::{factorize, is_epi, is_strong_mono, Factorization, ImageClosure, Step};
pub use functor::{FinFunctor, NatTrans};
pub use gamma::{canonical_generators, GenSeed, GenStep, Generator, GeneratingFamily};
pub use hom::HomCat;
pub use iso::{find_isomorphism, is_isomorphic};
pub use present::CatPresentation;

use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::budget::BudgetExceeded;

/// Sentinel for "pair not composable" in the flat composition table.
const NOT_COMPOSABLE: u32 = u32::MAX;

/// Errors from building or combining finite categories.
#[derive(Debug, Clone, Error)]
pub enum CatError {
    #[error("object {object} has no identity arrow")]
    MissingIdentity { object: usize },
    #[error("identity law fails at arrow {arrow}")]
    IdentityLaw { arrow: usize },
    #[error("associativity fails on triple ({h}, {g}, {f})")]
    NonAssociative { h: usize, g: usize, f: usize },
    #[error("composition table is wrong at pair ({g}, {f}): {reason}")]
    BadComposite { g: usize, f: usize, reason: String },
    #[error("malformed category data: {0}")]
    Malformed(String),
    #[error("presentation closure exceeded the bound of {bound} arrows")]
    ClosureBoundExceeded { bound: usize },
    #[error("family does not generate: arrow {witness} is unreachable")]
    NotGenerating { witness: usize },
    #[error(transparent)]
    SizeBound(#[from] BudgetExceeded),
}

/// An arrow of a finite category: label plus endpoints.
#[derive(Debug, Clone)]
pub struct Arrow {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category given by a total composition table.
///
/// Objects and arrows are identified by their index; labels are carried for
/// rendering only and are ignored by equality and hashing.
#[derive(Debug)]
pub struct FinCat {
    object_labels: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<u32>,
    /// Flat table: `comp[g * n_arrows + f]` is `g∘f`, or `NOT_COMPOSABLE`.
    comp: Vec<u32>,
    /// Two-sided inverse per arrow, if any.
    inverses: Vec<Option<u32>>,
    fingerprint: u64,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && self.object_labels.len() == other.object_labels.len()
            && self.identities == other.identities
            && self.comp == other.comp
            && self.arrows.len() == other.arrows.len()
            && self
                .arrows
                .iter()
                .zip(&other.arrows)
                .all(|(a, b)| a.src == b.src && a.tgt == b.tgt)
    }
}

impl Eq for FinCat {}

impl Hash for FinCat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

impl FinCat {
    /// Builds and validates a category from an explicit table.
    ///
    /// `compose(g, f)` must return `Some` exactly when `tgt(f) == src(g)`.
    pub fn from_table(
        object_labels: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Arc<FinCat>, CatError> {
        let cat = Self::assemble(object_labels, arrows, identities, compose)?;
        cat.validate()?;
        Ok(Arc::new(cat))
    }

    /// Builds without the associativity/identity sweep. For callers whose
    /// construction guarantees the laws (validated in debug builds).
    pub(crate) fn from_table_unchecked(
        object_labels: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Arc<FinCat>, CatError> {
        let cat = Self::assemble(object_labels, arrows, identities, compose)?;
        debug_assert!(cat.validate().is_ok(), "unchecked table fails validation");
        Ok(Arc::new(cat))
    }

    fn assemble(
        object_labels: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<FinCat, CatError> {
        let n_obj = object_labels.len();
        let n_arr = arrows.len();
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= n_obj || a.tgt >= n_obj {
                return Err(CatError::Malformed(format!(
                    "arrow {i} has endpoint outside the object range"
                )));
            }
        }
        if identities.len() != n_obj {
            return Err(CatError::Malformed(format!(
                "{} identities given for {} objects",
                identities.len(),
                n_obj
            )));
        }
        for (o, &ia) in identities.iter().enumerate() {
            let a = arrows
                .get(ia)
                .ok_or(CatError::MissingIdentity { object: o })?;
            if a.src != o || a.tgt != o {
                return Err(CatError::MissingIdentity { object: o });
            }
        }
        let mut comp = vec![NOT_COMPOSABLE; n_arr * n_arr];
        for g in 0..n_arr {
            for f in 0..n_arr {
                let composable = arrows[f].tgt == arrows[g].src;
                match compose(g, f) {
                    Some(gf) => {
                        if !composable {
                            return Err(CatError::BadComposite {
                                g,
                                f,
                                reason: "defined on a non-composable pair".into(),
                            });
                        }
                        let c = arrows.get(gf).ok_or_else(|| CatError::BadComposite {
                            g,
                            f,
                            reason: "result out of range".into(),
                        })?;
                        if c.src != arrows[f].src || c.tgt != arrows[g].tgt {
                            return Err(CatError::BadComposite {
                                g,
                                f,
                                reason: "result has wrong endpoints".into(),
                            });
                        }
                        comp[g * n_arr + f] = gf as u32;
                    }
                    None => {
                        if composable {
                            return Err(CatError::BadComposite {
                                g,
                                f,
                                reason: "undefined on a composable pair".into(),
                            });
                        }
                    }
                }
            }
        }
        let identities: Vec<u32> = identities.iter().map(|&i| i as u32).collect();
        let mut cat = FinCat {
            object_labels,
            arrows,
            identities,
            comp,
            inverses: Vec::new(),
            fingerprint: 0,
        };
        cat.inverses = cat.compute_inverses();
        cat.fingerprint = cat.compute_fingerprint();
        Ok(cat)
    }

    /// Checks the identity laws and associativity exhaustively.
    pub fn validate(&self) -> Result<(), CatError> {
        let n = self.n_arrows();
        for f in 0..n {
            let id_s = self.identity(self.src(f)) as usize;
            let id_t = self.identity(self.tgt(f)) as usize;
            if self.compose(f, id_s) != Some(f) || self.compose(id_t, f) != Some(f) {
                return Err(CatError::IdentityLaw { arrow: f });
            }
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = self.compose(h, g) else { continue };
                for f in 0..n {
                    let Some(gf) = self.compose(g, f) else { continue };
                    if self.compose(hg, f) != self.compose(h, gf) {
                        return Err(CatError::NonAssociative { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_inverses(&self) -> Vec<Option<u32>> {
        (0..self.n_arrows())
            .map(|a| {
                let id_s = self.identity(self.src(a));
                let id_t = self.identity(self.tgt(a));
                (0..self.n_arrows())
                    .find(|&b| {
                        self.compose(b, a) == Some(id_s as usize)
                            && self.compose(a, b) == Some(id_t as usize)
                    })
                    .map(|b| b as u32)
            })
            .collect()
    }

    fn compute_fingerprint(&self) -> u64 {
        // FNV-1a over the label-free structure.
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u64| {
            h ^= v;
            h = h.wrapping_mul(0x100000001b3);
        };
        eat(self.object_labels.len() as u64);
        eat(self.arrows.len() as u64);
        for a in &self.arrows {
            eat(a.src as u64);
            eat(a.tgt as u64);
        }
        for &i in &self.identities {
            eat(i as u64);
        }
        for &c in &self.comp {
            eat(c as u64);
        }
        h
    }

    pub fn n_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn src(&self, arrow: usize) -> usize {
        self.arrows[arrow].src
    }

    pub fn tgt(&self, arrow: usize) -> usize {
        self.arrows[arrow].tgt
    }

    pub fn identity(&self, object: usize) -> u32 {
        self.identities[object]
    }

    pub fn is_identity(&self, arrow: usize) -> bool {
        self.identities[self.arrows[arrow].src] as usize == arrow
            && self.arrows[arrow].src == self.arrows[arrow].tgt
    }

    /// `g ∘ f`, defined when `tgt(f) == src(g)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let v = self.comp[g * self.n_arrows() + f];
        (v != NOT_COMPOSABLE).then_some(v as usize)
    }

    pub fn inverse(&self, arrow: usize) -> Option<usize> {
        self.inverses[arrow].map(|v| v as usize)
    }

    pub fn is_invertible(&self, arrow: usize) -> bool {
        self.inverses[arrow].is_some()
    }

    /// All arrows from `x` to `y`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.n_arrows())
            .filter(|&a| self.src(a) == x && self.tgt(a) == y)
            .collect()
    }

    pub fn object_label(&self, o: usize) -> &str {
        &self.object_labels[o]
    }

    pub fn arrow_label(&self, a: usize) -> &str {
        &self.arrows[a].label
    }

    pub fn object_by_label(&self, label: &str) -> Option<usize> {
        self.object_labels.iter().position(|l| l == label)
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// True when every arrow is invertible.
    pub fn is_groupoid(&self) -> bool {
        (0..self.n_arrows()).all(|a| self.is_invertible(a))
    }

    /// True when every arrow is an identity.
    pub fn is_discrete(&self) -> bool {
        (0..self.n_arrows()).all(|a| self.is_identity(a))
    }

    // ---- standard small categories ----

    /// The empty category.
    pub fn empty() -> Arc<FinCat> {
        FinCat::from_table_unchecked(vec![], vec![], vec![], |_, _| None).unwrap()
    }

    /// The terminal category (one object, its identity).
    pub fn one() -> Arc<FinCat> {
        FinCat::from_table_unchecked(
            vec!["*".into()],
            vec![Arrow { label: "id_*".into(), src: 0, tgt: 0 }],
            vec![0],
            |_, _| Some(0),
        )
        .unwrap()
    }

    /// The walking arrow `0 -> 1` (arrow label `u`).
    pub fn two() -> Arc<FinCat> {
        FinCat::from_table_unchecked(
            vec!["0".into(), "1".into()],
            vec![
                Arrow { label: "id_0".into(), src: 0, tgt: 0 },
                Arrow { label: "id_1".into(), src: 1, tgt: 1 },
                Arrow { label: "u".into(), src: 0, tgt: 1 },
            ],
            vec![0, 1],
            |g, f| match (g, f) {
                (0, 0) => Some(0),
                (1, 1) => Some(1),
                (2, 0) | (1, 2) => Some(2),
                _ => None,
            },
        )
        .unwrap()
    }

    /// The composable pair `0 -> 1 -> 2` with its composite (arrows
    /// `a01`, `a12`, `a02`).
    pub fn three() -> Arc<FinCat> {
        FinCat::from_table_unchecked(
            vec!["0".into(), "1".into(), "2".into()],
            vec![
                Arrow { label: "id_0".into(), src: 0, tgt: 0 },
                Arrow { label: "id_1".into(), src: 1, tgt: 1 },
                Arrow { label: "id_2".into(), src: 2, tgt: 2 },
                Arrow { label: "a01".into(), src: 0, tgt: 1 },
                Arrow { label: "a12".into(), src: 1, tgt: 2 },
                Arrow { label: "a02".into(), src: 0, tgt: 2 },
            ],
            vec![0, 1, 2],
            |g, f| match (g, f) {
                (0, 0) => Some(0),
                (1, 1) => Some(1),
                (2, 2) => Some(2),
                (3, 0) | (1, 3) => Some(3),
                (4, 1) | (2, 4) => Some(4),
                (5, 0) | (2, 5) => Some(5),
                (4, 3) => Some(5),
                _ => None,
            },
        )
        .unwrap()
    }

    /// The walking isomorphism `0 ≅ 1` (arrows `u: 0 -> 1`, `v: 1 -> 0`).
    pub fn iso() -> Arc<FinCat> {
        FinCat::from_table_unchecked(
            vec!["0".into(), "1".into()],
            vec![
                Arrow { label: "id_0".into(), src: 0, tgt: 0 },
                Arrow { label: "id_1".into(), src: 1, tgt: 1 },
                Arrow { label: "u".into(), src: 0, tgt: 1 },
                Arrow { label: "v".into(), src: 1, tgt: 0 },
            ],
            vec![0, 1],
            |g, f| match (g, f) {
                (0, 0) => Some(0),
                (1, 1) => Some(1),
                (2, 0) | (1, 2) => Some(2),
                (3, 1) | (0, 3) => Some(3),
                (3, 2) => Some(0),
                (2, 3) => Some(1),
                _ => None,
            },
        )
        .unwrap()
    }

    /// The discrete category on `n` objects.
    pub fn discrete(n: usize) -> Arc<FinCat> {
        FinCat::from_table_unchecked(
            (0..n).map(|i| format!("{i}")).collect(),
            (0..n)
                .map(|i| Arrow { label: format!("id_{i}"), src: i, tgt: i })
                .collect(),
            (0..n).collect(),
            |g, f| (g == f).then_some(g),
        )
        .unwrap()
    }

    /// Binary product, componentwise tables. Object `(i, j)` has index
    /// `i * b.n_objects() + j`; likewise for arrows.
    pub fn product(a: &FinCat, b: &FinCat) -> Arc<FinCat> {
        let objects = a
            .object_labels
            .iter()
            .flat_map(|la| {
                b.object_labels
                    .iter()
                    .map(move |lb| format!("({la},{lb})"))
            })
            .collect();
        let arrows: Vec<Arrow> = (0..a.n_arrows())
            .flat_map(|fa| {
                (0..b.n_arrows()).map(move |fb| (fa, fb))
            })
            .map(|(fa, fb)| Arrow {
                label: format!("({},{})", a.arrow_label(fa), b.arrow_label(fb)),
                src: a.src(fa) * b.n_objects() + b.src(fb),
                tgt: a.tgt(fa) * b.n_objects() + b.tgt(fb),
            })
            .collect();
        let identities = (0..a.n_objects())
            .flat_map(|oa| {
                (0..b.n_objects()).map(move |ob| (oa, ob))
            })
            .map(|(oa, ob)| a.identity(oa) as usize * b.n_arrows() + b.identity(ob) as usize)
            .collect();
        let nb = b.n_arrows();
        FinCat::from_table_unchecked(objects, arrows, identities, |g, f| {
            let (ga, gb) = (g / nb, g % nb);
            let (fa, fb) = (f / nb, f % nb);
            match (a.compose(ga, fa), b.compose(gb, fb)) {
                (Some(ca), Some(cb)) => Some(ca * nb + cb),
                _ => None,
            }
        })
        .unwrap()
    }

    /// Finite coproduct: disjoint union of the summands.
    pub fn coproduct(parts: &[&FinCat]) -> Arc<FinCat> {
        let mut objects = Vec::new();
        let mut arrows = Vec::new();
        let mut identities = Vec::new();
        let mut arrow_part = Vec::new();
        let mut arrow_local = Vec::new();
        let mut obj_offset = 0usize;
        let mut arr_offsets = Vec::new();
        for (pi, p) in parts.iter().enumerate() {
            arr_offsets.push(arrows.len());
            for (o, l) in p.object_labels.iter().enumerate() {
                objects.push(format!("{pi}:{l}"));
                let _ = o;
            }
            for (ai, a) in p.arrows.iter().enumerate() {
                arrows.push(Arrow {
                    label: format!("{pi}:{}", a.label),
                    src: a.src + obj_offset,
                    tgt: a.tgt + obj_offset,
                });
                arrow_part.push(pi);
                arrow_local.push(ai);
            }
            for o in 0..p.n_objects() {
                identities.push(arr_offsets[pi] + p.identity(o) as usize);
            }
            obj_offset += p.n_objects();
        }
        FinCat::from_table_unchecked(objects, arrows, identities, |g, f| {
            if arrow_part[g] != arrow_part[f] {
                return None;
            }
            let p = parts[arrow_part[g]];
            p.compose(arrow_local[g], arrow_local[f])
                .map(|c| arr_offsets[arrow_part[g]] + c)
        })
        .unwrap()
    }

    /// Coproduct together with the summand inclusion functors.
    pub fn coproduct_with_injections(parts: &[Arc<FinCat>]) -> (Arc<FinCat>, Vec<FinFunctor>) {
        let refs: Vec<&FinCat> = parts.iter().map(|p| p.as_ref()).collect();
        let total = FinCat::coproduct(&refs);
        let mut injections = Vec::with_capacity(parts.len());
        let mut obj_offset = 0u32;
        let mut arr_offset = 0u32;
        for p in parts {
            let ob_map = (0..p.n_objects() as u32).map(|o| o + obj_offset).collect();
            let arr_map = (0..p.n_arrows() as u32).map(|a| a + arr_offset).collect();
            injections.push(FinFunctor::new_unchecked(
                p.clone(),
                total.clone(),
                ob_map,
                arr_map,
            ));
            obj_offset += p.n_objects() as u32;
            arr_offset += p.n_arrows() as u32;
        }
        (total, injections)
    }
}

impl std::fmt::Display for FinCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "category({} objects, {} arrows)",
            self.n_objects(),
            self.n_arrows()
        )
    }
}
