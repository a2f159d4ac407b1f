//! Functors and natural transformations between finite categories,
//! validated exhaustively on construction.

use std::sync::Arc;

use super::{CatError, FinCat};

/// A functor between finite categories, stored as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    ob_map: Vec<u32>,
    arr_map: Vec<u32>,
}

impl FinFunctor {
    /// Validates preservation of endpoints, identities, and composition.
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        ob_map: Vec<u32>,
        arr_map: Vec<u32>,
    ) -> Result<FinFunctor, CatError> {
        if ob_map.len() != dom.n_objects() || arr_map.len() != dom.n_arrows() {
            return Err(CatError::Malformed("functor map lengths do not match".into()));
        }
        for &o in &ob_map {
            if o as usize >= cod.n_objects() {
                return Err(CatError::Malformed("functor object image out of range".into()));
            }
        }
        for a in 0..dom.n_arrows() {
            let fa = arr_map[a] as usize;
            if fa >= cod.n_arrows() {
                return Err(CatError::Malformed("functor arrow image out of range".into()));
            }
            if cod.src(fa) != ob_map[dom.src(a)] as usize
                || cod.tgt(fa) != ob_map[dom.tgt(a)] as usize
            {
                return Err(CatError::Malformed(format!(
                    "functor breaks endpoints at arrow {a}"
                )));
            }
        }
        for o in 0..dom.n_objects() {
            if arr_map[dom.identity(o) as usize] != cod.identity(ob_map[o] as usize) {
                return Err(CatError::Malformed(format!(
                    "functor breaks the identity at object {o}"
                )));
            }
        }
        for g in 0..dom.n_arrows() {
            for f in 0..dom.n_arrows() {
                if let Some(gf) = dom.compose(g, f) {
                    let c = cod.compose(arr_map[g] as usize, arr_map[f] as usize);
                    if c != Some(arr_map[gf] as usize) {
                        return Err(CatError::Malformed(format!(
                            "functor breaks composition at ({g}, {f})"
                        )));
                    }
                }
            }
        }
        Ok(FinFunctor { dom, cod, ob_map, arr_map })
    }

    /// Construction bypassing validation, for callers that build lawfully.
    pub(crate) fn new_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        ob_map: Vec<u32>,
        arr_map: Vec<u32>,
    ) -> FinFunctor {
        debug_assert!(
            FinFunctor::new(dom.clone(), cod.clone(), ob_map.clone(), arr_map.clone()).is_ok()
        );
        FinFunctor { dom, cod, ob_map, arr_map }
    }

    pub fn identity(cat: Arc<FinCat>) -> FinFunctor {
        let ob_map = (0..cat.n_objects() as u32).collect();
        let arr_map = (0..cat.n_arrows() as u32).collect();
        FinFunctor { dom: cat.clone(), cod: cat, ob_map, arr_map }
    }

    /// `g ∘ f` (apply `f` first). Panics if the middle categories differ.
    pub fn compose(g: &FinFunctor, f: &FinFunctor) -> FinFunctor {
        assert_eq!(f.cod, g.dom, "functor composition endpoint mismatch");
        FinFunctor {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            ob_map: f.ob_map.iter().map(|&o| g.ob_map[o as usize]).collect(),
            arr_map: f.arr_map.iter().map(|&a| g.arr_map[a as usize]).collect(),
        }
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn ob(&self, o: usize) -> usize {
        self.ob_map[o] as usize
    }

    pub fn arr(&self, a: usize) -> usize {
        self.arr_map[a] as usize
    }

    pub fn ob_map(&self) -> &[u32] {
        &self.ob_map
    }

    pub fn arr_map(&self) -> &[u32] {
        &self.arr_map
    }

    pub fn is_identity_functor(&self) -> bool {
        self.dom == self.cod
            && self.ob_map.iter().enumerate().all(|(i, &o)| i as u32 == o)
            && self.arr_map.iter().enumerate().all(|(i, &a)| i as u32 == a)
    }
}

/// A natural transformation between two parallel functors, with one
/// component arrow per domain object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    src: FinFunctor,
    tgt: FinFunctor,
    components: Vec<u32>,
}

impl NatTrans {
    /// Validates endpoints and every naturality square.
    pub fn new(
        src: FinFunctor,
        tgt: FinFunctor,
        components: Vec<u32>,
    ) -> Result<NatTrans, CatError> {
        if src.dom != tgt.dom || src.cod != tgt.cod {
            return Err(CatError::Malformed(
                "natural transformation between non-parallel functors".into(),
            ));
        }
        let dom = src.dom.clone();
        let cod = src.cod.clone();
        if components.len() != dom.n_objects() {
            return Err(CatError::Malformed("one component per object required".into()));
        }
        for o in 0..dom.n_objects() {
            let c = components[o] as usize;
            if c >= cod.n_arrows() || cod.src(c) != src.ob(o) || cod.tgt(c) != tgt.ob(o) {
                return Err(CatError::Malformed(format!(
                    "component at object {o} has wrong endpoints"
                )));
            }
        }
        for a in 0..dom.n_arrows() {
            let (x, y) = (dom.src(a), dom.tgt(a));
            let left = cod.compose(components[y] as usize, src.arr(a));
            let right = cod.compose(tgt.arr(a), components[x] as usize);
            if left != right || left.is_none() {
                return Err(CatError::Malformed(format!(
                    "naturality square fails at arrow {a}"
                )));
            }
        }
        Ok(NatTrans { src, tgt, components })
    }

    pub fn src(&self) -> &FinFunctor {
        &self.src
    }

    pub fn tgt(&self) -> &FinFunctor {
        &self.tgt
    }

    pub fn component(&self, o: usize) -> usize {
        self.components[o] as usize
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_functor_validates() {
        let c = FinCat::three();
        let f = FinFunctor::identity(c.clone());
        assert!(FinFunctor::new(c.clone(), c, f.ob_map.clone(), f.arr_map.clone()).is_ok());
    }

    #[test]
    fn endpoint_breaking_map_is_rejected() {
        let two = FinCat::two();
        let one = FinCat::one();
        // u must land on an endomorphism of the image object; id is fine,
        // but mapping object 1 out of range is not.
        let bad = FinFunctor::new(two.clone(), one.clone(), vec![0, 1], vec![0, 0, 0]);
        assert!(bad.is_err());
        let good = FinFunctor::new(two, one, vec![0, 0], vec![0, 0, 0]);
        assert!(good.is_ok());
    }

    #[test]
    fn naturality_is_enforced() {
        // Functors const_0 and const_1 from 2 to 2; the only transformation
        // has component u at both objects.
        let two = FinCat::two();
        let c0 = FinFunctor::new(two.clone(), two.clone(), vec![0, 0], vec![0, 0, 0]).unwrap();
        let c1 = FinFunctor::new(two.clone(), two.clone(), vec![1, 1], vec![1, 1, 1]).unwrap();
        let u = two.arrow_by_label("u").unwrap() as u32;
        assert!(NatTrans::new(c0.clone(), c1.clone(), vec![u, u]).is_ok());
        // A mismatched component set fails endpoint checks.
        assert!(NatTrans::new(c0, c1, vec![u, 0]).is_err());
    }
}
