//! Finite categories presented by generators and relations.
//!
//! The closure runs a coset-enumeration style procedure on arrows: elements
//! are congruence classes of generator paths out of the identities, the
//! action of each generator is tabulated, and relations are traced at every
//! element, merging classes on coincidences. Presentations that do not
//! visibly close within the configured bound are rejected rather than
//! guessed finite.

use std::sync::Arc;

use super::{Arrow, CatError, FinCat};

/// A presentation: objects, generating arrows, and relations between
/// generator paths.
///
/// Paths are in application order (`vec![u, v]` is the composite `v ∘ u`);
/// an empty path denotes the identity at the relation's shared object.
#[derive(Debug, Clone)]
pub struct CatPresentation {
    pub object_labels: Vec<String>,
    /// `(label, src, tgt)` per generating arrow.
    pub generators: Vec<(String, usize, usize)>,
    /// Pairs of parallel paths to be identified. For an empty path the
    /// object is taken from the other side's endpoints.
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl CatPresentation {
    fn path_endpoints(&self, path: &[usize]) -> Result<Option<(usize, usize)>, CatError> {
        let mut it = path.iter();
        let Some(&first) = it.next() else { return Ok(None) };
        let (_, src, mut cur) = self
            .generators
            .get(first)
            .cloned()
            .ok_or_else(|| CatError::Malformed("relation path uses unknown generator".into()))?;
        for &g in it {
            let (_, s, t) = self
                .generators
                .get(g)
                .cloned()
                .ok_or_else(|| CatError::Malformed("relation path uses unknown generator".into()))?;
            if s != cur {
                return Err(CatError::Malformed(
                    "relation path is not composable".into(),
                ));
            }
            cur = t;
        }
        Ok(Some((src, cur)))
    }

    fn validate_shape(&self) -> Result<(), CatError> {
        for (label, s, t) in &self.generators {
            if *s >= self.object_labels.len() || *t >= self.object_labels.len() {
                return Err(CatError::Malformed(format!(
                    "generator {label} has an endpoint outside the object range"
                )));
            }
        }
        for (lhs, rhs) in &self.relations {
            let le = self.path_endpoints(lhs)?;
            let re = self.path_endpoints(rhs)?;
            match (le, re) {
                (Some(a), Some(b)) if a != b => {
                    return Err(CatError::Malformed(
                        "relation sides have different endpoints".into(),
                    ))
                }
                (None, None) => {
                    return Err(CatError::Malformed(
                        "relation between two empty paths is meaningless".into(),
                    ))
                }
                (Some((s, t)), None) | (None, Some((s, t))) if s != t => {
                    return Err(CatError::Malformed(
                        "empty path equated with a non-endomorphism".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Closes the presentation into a finite category, or fails with
    /// `ClosureBoundExceeded` when more than `bound` distinct arrows appear.
    pub fn close(&self, bound: usize) -> Result<Arc<FinCat>, CatError> {
        self.validate_shape()?;
        let n_obj = self.object_labels.len();
        let n_gen = self.generators.len();

        // Element store. Parents record the defining path.
        struct Elem {
            src: usize,
            tgt: usize,
            parent: Option<(usize, usize)>, // (element, generator applied)
            act: Vec<Option<usize>>,        // left action per generator
        }
        let mut elems: Vec<Elem> = Vec::new();
        let mut uf: Vec<usize> = Vec::new();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }

        let mut live = 0usize;
        let new_elem = |elems: &mut Vec<Elem>,
                            uf: &mut Vec<usize>,
                            live: &mut usize,
                            src: usize,
                            tgt: usize,
                            parent: Option<(usize, usize)>|
         -> usize {
            let id = elems.len();
            elems.push(Elem { src, tgt, parent, act: vec![None; n_gen] });
            uf.push(id);
            *live += 1;
            id
        };

        // Identities and generator elements.
        let id_elem: Vec<usize> = (0..n_obj)
            .map(|o| new_elem(&mut elems, &mut uf, &mut live, o, o, None))
            .collect();
        for (g, (_, s, t)) in self.generators.iter().enumerate() {
            let e = new_elem(&mut elems, &mut uf, &mut live, *s, *t, Some((id_elem[*s], g)));
            elems[id_elem[*s]].act[g] = Some(e);
        }

        let mut pending: Vec<(usize, usize)> = Vec::new();

        // Applies generator g to element e, defining a new element if needed.
        #[allow(clippy::too_many_arguments)]
        fn apply(
            elems: &mut Vec<Elem>,
            uf: &mut Vec<usize>,
            live: &mut usize,
            gens: &[(String, usize, usize)],
            e: usize,
            g: usize,
            n_gen: usize,
        ) -> Option<usize> {
            let e = find(uf, e);
            let (gs, gt) = (gens[g].1, gens[g].2);
            if elems[e].tgt != gs {
                return None;
            }
            if let Some(x) = elems[e].act[g] {
                return Some(find(uf, x));
            }
            let id = elems.len();
            elems.push(Elem {
                src: elems[e].src,
                tgt: gt,
                parent: Some((e, g)),
                act: vec![None; n_gen],
            });
            uf.push(id);
            *live += 1;
            elems[e].act[g] = Some(id);
            Some(id)
        }

        // Merge two elements and propagate through the action tables.
        fn merge(
            elems: &mut Vec<Elem>,
            uf: &mut Vec<usize>,
            live: &mut usize,
            pending: &mut Vec<(usize, usize)>,
            a: usize,
            b: usize,
        ) {
            pending.push((a, b));
            while let Some((a, b)) = pending.pop() {
                let (a, b) = (find(uf, a), find(uf, b));
                if a == b {
                    continue;
                }
                // Keep the older element as representative.
                let (keep, drop) = if a < b { (a, b) } else { (b, a) };
                uf[drop] = keep;
                *live -= 1;
                for g in 0..elems[drop].act.len() {
                    if let Some(x) = elems[drop].act[g] {
                        match elems[keep].act[g] {
                            Some(y) => pending.push((x, y)),
                            None => elems[keep].act[g] = Some(x),
                        }
                    }
                }
            }
        }

        // Trace a path from an element; defines entries as it goes.
        #[allow(clippy::too_many_arguments)]
        fn trace(
            elems: &mut Vec<Elem>,
            uf: &mut Vec<usize>,
            live: &mut usize,
            gens: &[(String, usize, usize)],
            start: usize,
            path: &[usize],
            n_gen: usize,
        ) -> Option<usize> {
            let mut cur = find(uf, start);
            for &g in path {
                cur = apply(elems, uf, live, gens, cur, g, n_gen)?;
                cur = find(uf, cur);
            }
            Some(cur)
        }

        // Main loop: fill actions breadth-first, trace relations to a fixed
        // point, respecting the bound.
        loop {
            if live > bound {
                return Err(CatError::ClosureBoundExceeded { bound });
            }
            let mut changed = false;

            // Trace every relation at every live element.
            for e in 0..elems.len() {
                if find(&mut uf, e) != e {
                    continue;
                }
                for (lhs, rhs) in &self.relations {
                    let te = elems[e].tgt;
                    let lhs_ok = lhs.first().map_or(true, |&g| self.generators[g].1 == te);
                    let rhs_ok = rhs.first().map_or(true, |&g| self.generators[g].1 == te);
                    if !lhs_ok || !rhs_ok {
                        continue;
                    }
                    let before = live;
                    let r1 = trace(&mut elems, &mut uf, &mut live, &self.generators, e, lhs, n_gen);
                    let r2 = trace(&mut elems, &mut uf, &mut live, &self.generators, e, rhs, n_gen);
                    if live != before {
                        changed = true;
                    }
                    if let (Some(r1), Some(r2)) = (r1, r2) {
                        if find(&mut uf, r1) != find(&mut uf, r2) {
                            merge(&mut elems, &mut uf, &mut live, &mut pending, r1, r2);
                            changed = true;
                        }
                    }
                }
                if live > bound {
                    return Err(CatError::ClosureBoundExceeded { bound });
                }
            }

            // Fill one round of undefined actions.
            for e in 0..elems.len() {
                if find(&mut uf, e) != e {
                    continue;
                }
                for g in 0..n_gen {
                    if elems[e].tgt == self.generators[g].1 && elems[e].act[g].is_none() {
                        apply(&mut elems, &mut uf, &mut live, &self.generators, e, g, n_gen);
                        changed = true;
                    }
                }
                if live > bound {
                    return Err(CatError::ClosureBoundExceeded { bound });
                }
            }

            if !changed {
                break;
            }
        }

        // Collect live classes in discovery order.
        let mut reps: Vec<usize> = Vec::new();
        let mut index_of = vec![usize::MAX; elems.len()];
        for e in 0..elems.len() {
            if find(&mut uf, e) == e {
                index_of[e] = reps.len();
                reps.push(e);
            }
        }

        // Defining path (application order) per element: jump to the class
        // representative, then follow its parent chain. Representatives are
        // the oldest members of their class and parents are always older, so
        // the walk strictly decreases and ends at an identity.
        let path_of = |elems: &Vec<Elem>, uf: &mut Vec<usize>, mut e: usize| -> Vec<usize> {
            let mut path = Vec::new();
            loop {
                e = find(uf, e);
                match elems[e].parent {
                    Some((p, g)) => {
                        path.push(g);
                        e = p;
                    }
                    None => break,
                }
            }
            path.reverse();
            path
        };

        let labels: Vec<String> = reps
            .iter()
            .map(|&e| {
                let p = path_of(&elems, &mut uf, e);
                if p.is_empty() {
                    format!("id_{}", self.object_labels[elems[e].src])
                } else {
                    p.iter()
                        .rev()
                        .map(|&g| self.generators[g].0.clone())
                        .collect::<Vec<_>>()
                        .join(".")
                }
            })
            .collect();

        let arrows: Vec<Arrow> = reps
            .iter()
            .zip(&labels)
            .map(|(&e, l)| Arrow { label: l.clone(), src: elems[e].src, tgt: elems[e].tgt })
            .collect();
        let identities: Vec<usize> = id_elem
            .iter()
            .map(|&e| index_of[find(&mut uf, e)])
            .collect();

        // Total composition by tracing the defining path of g over f.
        let mut comp_cache = vec![vec![usize::MAX; reps.len()]; reps.len()];
        for gi in 0..reps.len() {
            let gpath = path_of(&elems, &mut uf, reps[gi]);
            for fi in 0..reps.len() {
                if arrows[fi].tgt != arrows[gi].src {
                    continue;
                }
                let r = trace(
                    &mut elems,
                    &mut uf,
                    &mut live,
                    &self.generators,
                    reps[fi],
                    &gpath,
                    n_gen,
                )
                .expect("closed table traces totally");
                comp_cache[gi][fi] = index_of[find(&mut uf, r)];
            }
        }

        FinCat::from_table(self.object_labels.clone(), arrows, identities, |g, f| {
            let v = comp_cache[g][f];
            (v != usize::MAX).then_some(v)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::is_isomorphic;

    #[test]
    fn walking_iso_from_presentation() {
        let p = CatPresentation {
            object_labels: vec!["0".into(), "1".into()],
            generators: vec![("u".into(), 0, 1), ("v".into(), 1, 0)],
            relations: vec![(vec![0, 1], vec![]), (vec![1, 0], vec![])],
        };
        let c = p.close(10_000).unwrap();
        assert_eq!(c.n_objects(), 2);
        assert_eq!(c.n_arrows(), 4);
        assert!(is_isomorphic(&c, &FinCat::iso()));
    }

    #[test]
    fn free_chain_closes_to_three() {
        let p = CatPresentation {
            object_labels: vec!["0".into(), "1".into(), "2".into()],
            generators: vec![("a".into(), 0, 1), ("b".into(), 1, 2)],
            relations: vec![],
        };
        let c = p.close(10_000).unwrap();
        assert!(is_isomorphic(&c, &FinCat::three()));
    }

    #[test]
    fn cyclic_monoid_presentation() {
        // One loop s with s·s·s = s: elements id, s, s².
        let p = CatPresentation {
            object_labels: vec!["*".into()],
            generators: vec![("s".into(), 0, 0)],
            relations: vec![(vec![0, 0, 0], vec![0])],
        };
        let c = p.close(10_000).unwrap();
        assert_eq!(c.n_arrows(), 3);
        c.validate().unwrap();
    }

    #[test]
    fn infinite_presentation_hits_the_bound() {
        // A free loop never closes.
        let p = CatPresentation {
            object_labels: vec!["*".into()],
            generators: vec![("s".into(), 0, 0)],
            relations: vec![],
        };
        match p.close(50) {
            Err(CatError::ClosureBoundExceeded { bound }) => assert_eq!(bound, 50),
            other => panic!("expected bound exceeded, got {other:?}"),
        }
    }

    #[test]
    fn z2_presentation() {
        let p = CatPresentation {
            object_labels: vec!["*".into()],
            generators: vec![("s".into(), 0, 0)],
            relations: vec![(vec![0, 0], vec![])],
        };
        let c = p.close(10_000).unwrap();
        assert_eq!(c.n_arrows(), 2);
        assert!(c.is_groupoid());
    }

    #[test]
    fn mismatched_relation_endpoints_rejected() {
        let p = CatPresentation {
            object_labels: vec!["0".into(), "1".into()],
            generators: vec![("u".into(), 0, 1)],
            relations: vec![(vec![0], vec![])],
        };
        assert!(matches!(p.close(10_000), Err(CatError::Malformed(_))));
    }
}
