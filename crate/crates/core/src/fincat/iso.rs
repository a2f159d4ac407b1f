//! Isomorphism search between finite categories by backtracking over
//! object and arrow bijections, with hom-profile pruning.

use super::FinCat;

/// Finds an isomorphism `(object map, arrow map)` from `a` to `b`, if any.
pub fn find_isomorphism(a: &FinCat, b: &FinCat) -> Option<(Vec<usize>, Vec<usize>)> {
    if a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows() {
        return None;
    }
    let n_obj = a.n_objects();
    // Invariant per object: sorted multiset of (out-degree to, in-degree from)
    // is too detailed; use (endo count, out count, in count) as a cheap filter.
    let profile = |c: &FinCat, o: usize| {
        let mut endo = 0;
        let mut out = 0;
        let mut inn = 0;
        for x in 0..c.n_arrows() {
            let s = c.src(x) == o;
            let t = c.tgt(x) == o;
            if s && t {
                endo += 1;
            } else if s {
                out += 1;
            } else if t {
                inn += 1;
            }
        }
        (endo, out, inn)
    };
    let pa: Vec<_> = (0..n_obj).map(|o| profile(a, o)).collect();
    let pb: Vec<_> = (0..n_obj).map(|o| profile(b, o)).collect();

    let mut ob_map = vec![usize::MAX; n_obj];
    let mut used = vec![false; n_obj];
    fn assign_objects(
        a: &FinCat,
        b: &FinCat,
        pa: &[(usize, usize, usize)],
        pb: &[(usize, usize, usize)],
        ob_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        o: usize,
    ) -> Option<Vec<usize>> {
        if o == a.n_objects() {
            return extend_to_arrows(a, b, ob_map);
        }
        for cand in 0..b.n_objects() {
            if used[cand] || pa[o] != pb[cand] {
                continue;
            }
            ob_map[o] = cand;
            used[cand] = true;
            if let Some(arr) = assign_objects(a, b, pa, pb, ob_map, used, o + 1) {
                return Some(arr);
            }
            used[cand] = false;
            ob_map[o] = usize::MAX;
        }
        None
    }

    fn extend_to_arrows(a: &FinCat, b: &FinCat, ob_map: &[usize]) -> Option<Vec<usize>> {
        let n = a.n_arrows();
        let mut arr_map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // Identities are forced.
        for o in 0..a.n_objects() {
            let ia = a.identity(o) as usize;
            let ib = b.identity(ob_map[o]) as usize;
            arr_map[ia] = ib;
            used[ib] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&x| arr_map[x] == usize::MAX).collect();
        fn rec(
            a: &FinCat,
            b: &FinCat,
            ob_map: &[usize],
            free: &[usize],
            arr_map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            k: usize,
        ) -> bool {
            if k == free.len() {
                // Full composition check.
                for g in 0..a.n_arrows() {
                    for f in 0..a.n_arrows() {
                        let lhs = a.compose(g, f).map(|c| arr_map[c]);
                        let rhs = b.compose(arr_map[g], arr_map[f]);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
                return true;
            }
            let x = free[k];
            for cand in 0..b.n_arrows() {
                if used[cand]
                    || b.src(cand) != ob_map[a.src(x)]
                    || b.tgt(cand) != ob_map[a.tgt(x)]
                {
                    continue;
                }
                arr_map[x] = cand;
                used[cand] = true;
                // Partial composition check against already-mapped arrows.
                let consistent = (0..a.n_arrows()).all(|y| {
                    if arr_map[y] == usize::MAX {
                        return true;
                    }
                    for (g, f) in [(x, y), (y, x)] {
                        if let Some(c) = a.compose(g, f) {
                            if arr_map[c] != usize::MAX {
                                if b.compose(arr_map[g], arr_map[f]) != Some(arr_map[c]) {
                                    return false;
                                }
                            }
                        }
                    }
                    true
                });
                if consistent && rec(a, b, ob_map, free, arr_map, used, k + 1) {
                    return true;
                }
                used[cand] = false;
                arr_map[x] = usize::MAX;
            }
            false
        }
        if rec(a, b, ob_map, &free, &mut arr_map, &mut used, 0) {
            Some(arr_map)
        } else {
            None
        }
    }

    let arr = assign_objects(a, b, &pa, &pb, &mut ob_map, &mut used, 0)?;
    Some((ob_map, arr))
}

pub fn is_isomorphic(a: &FinCat, b: &FinCat) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::Arrow;

    #[test]
    fn relabeled_categories_are_isomorphic() {
        let two = FinCat::two();
        // Same shape with swapped object order.
        let swapped = FinCat::from_table(
            vec!["b".into(), "a".into()],
            vec![
                Arrow { label: "id_b".into(), src: 0, tgt: 0 },
                Arrow { label: "id_a".into(), src: 1, tgt: 1 },
                Arrow { label: "w".into(), src: 1, tgt: 0 },
            ],
            vec![0, 1],
            |g, f| match (g, f) {
                (0, 0) => Some(0),
                (1, 1) => Some(1),
                (2, 1) | (0, 2) => Some(2),
                _ => None,
            },
        )
        .unwrap();
        assert!(is_isomorphic(&two, &swapped));
    }

    #[test]
    fn walking_iso_differs_from_two_plus_loop() {
        // Same counts (2 objects, 4 arrows) but not isomorphic.
        let iso = FinCat::iso();
        let with_loop = FinCat::from_table(
            vec!["0".into(), "1".into()],
            vec![
                Arrow { label: "id_0".into(), src: 0, tgt: 0 },
                Arrow { label: "id_1".into(), src: 1, tgt: 1 },
                Arrow { label: "u".into(), src: 0, tgt: 1 },
                Arrow { label: "e".into(), src: 0, tgt: 0 },
            ],
            vec![0, 1],
            |g, f| match (g, f) {
                (0, 0) => Some(0),
                (1, 1) => Some(1),
                (2, 0) | (1, 2) => Some(2),
                (3, 0) | (0, 3) => Some(3),
                (3, 3) => Some(3),
                (2, 3) => Some(2),
                _ => None,
            },
        )
        .unwrap();
        assert!(!is_isomorphic(&iso, &with_loop));
    }
}
