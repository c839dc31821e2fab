//! Hilbert-Mumford machinery over small finite fields.
//!
//! The torus-level decisions are exact and complete: the negative-weight
//! set I(lambda, v) depends only on the signs of the pairings of lambda
//! against the present weights, so scanning one representative per face of
//! the weight hyperplane arrangement (see [`cone`]) is equivalent to
//! scanning every nontrivial one-parameter subgroup of the fixed torus.
//! Group motion is handled by a finite scan over generator words; a found
//! pair (g, mu) with I(mu, g v) empty certifies v not stable via
//! lambda = g^-1 mu g. The scan never certifies stability by itself.

pub mod cone;
pub mod field;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::Error;
use crate::ring::Ring;

use field::Fq;

/// Integer cocharacter of the fixed maximal torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cocharacter {
    pub vector: Vec<i64>,
}

impl Cocharacter {
    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|&c| c == 0)
    }

    pub fn pair(&self, weight: &[i64]) -> i64 {
        weight.iter().zip(&self.vector).map(|(&w, &l)| w * l).sum()
    }
}

/// A vector in a torus representation, one weight per coordinate line.
#[derive(Clone, Debug)]
pub struct WeightedVector<R: Ring> {
    pub coords: Vec<R::Elem>,
    /// `weights[i]` is the torus weight of the `i`-th coordinate.
    pub weights: Vec<Vec<i64>>,
}

impl<R: Ring> WeightedVector<R> {
    pub fn new(coords: Vec<R::Elem>, weights: Vec<Vec<i64>>) -> Result<Self, Error> {
        if coords.len() != weights.len() {
            return Err(Error::DimensionMismatch);
        }
        Ok(WeightedVector { coords, weights })
    }

    /// Deduplicated weights of the nonzero coordinates, sorted.
    pub fn present_weights(&self, ring: &R) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self
            .coords
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| !ring.is_zero(c))
            .map(|(_, w)| w.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// `I(lambda, v)`: the set of negative pairings over present weights.
pub fn negative_weight_set<R: Ring>(
    ring: &R,
    lambda: &Cocharacter,
    v: &WeightedVector<R>,
) -> BTreeSet<i64> {
    v.present_weights(ring)
        .iter()
        .map(|w| lambda.pair(w))
        .filter(|&d| d < 0)
        .collect()
}

/// Exact torus stability: every nonzero cocharacter must see a negative
/// weight. Complete via the face-representative scan.
pub fn torus_stable<R: Ring>(ring: &R, v: &WeightedVector<R>, rank: usize) -> Result<bool, Error> {
    let present = v.present_weights(ring);
    if present.is_empty() {
        return Ok(false);
    }
    let reps = cone::chamber_cocharacters(&present, rank)?;
    Ok(reps
        .iter()
        .all(|lam| present.iter().any(|w| lam.pair(w) < 0)))
}

/// Exact torus semistability: no cocharacter makes every present weight
/// strictly positive.
pub fn torus_semistable<R: Ring>(
    ring: &R,
    v: &WeightedVector<R>,
    rank: usize,
) -> Result<bool, Error> {
    let present = v.present_weights(ring);
    if present.is_empty() {
        return Ok(false);
    }
    let reps = cone::chamber_cocharacters(&present, rank)?;
    Ok(!reps
        .iter()
        .any(|lam| present.iter().all(|w| lam.pair(w) > 0)))
}

/// A non-stability certificate: after moving `v` by the group word, the
/// cocharacter sees no negative weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Destabilizer {
    /// Generator indices, applied left to right.
    pub word: Vec<usize>,
    pub cochar: Cocharacter,
}

pub fn apply_matrix(field: &Fq, m: &[Vec<u16>], v: &[u16]) -> Vec<u16> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u16, |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

pub fn mat_mul(field: &Fq, a: &[Vec<u16>], b: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(0u16, |acc, k| {
                        field.add(&acc, &field.mul(&a[i][k], &b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}

/// Breadth-first closure of the generator set, capped at `budget` elements.
/// Words are the lexicographically minimal shortest words, so the scan
/// order, and hence any reported certificate, is canonical.
pub fn group_closure(
    field: &Fq,
    generators: &[Vec<Vec<u16>>],
    dim: usize,
    budget: usize,
) -> Result<Vec<(Vec<usize>, Vec<Vec<u16>>)>, Error> {
    let id: Vec<Vec<u16>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    let mut seen: HashMap<Vec<Vec<u16>>, usize> = HashMap::new();
    seen.insert(id.clone(), 0);
    let mut out = vec![(Vec::new(), id)];
    let mut head = 0;
    while head < out.len() {
        for (gi, g) in generators.iter().enumerate() {
            let next = mat_mul(field, &out[head].1, g);
            if !seen.contains_key(&next) {
                if out.len() >= budget {
                    return Err(Error::BudgetExhausted);
                }
                seen.insert(next.clone(), out.len());
                let mut word = out[head].0.clone();
                word.push(gi);
                out.push((word, next));
            }
        }
        head += 1;
    }
    Ok(out)
}

/// Scan the generator closure against the cocharacter test set. Returns the
/// first certificate in canonical order, `Ok(None)` for a completed empty
/// scan, and `BudgetExhausted` if the closure was cut off first.
pub fn find_destabilizer(
    field: &Fq,
    v: &WeightedVector<Fq>,
    generators: &[Vec<Vec<u16>>],
    cochar_reps: &[Cocharacter],
    budget: usize,
) -> Result<Option<Destabilizer>, Error> {
    let dim = v.coords.len();
    let elements = group_closure(field, generators, dim, budget)?;
    for (word, g) in &elements {
        let moved = WeightedVector::<Fq> {
            coords: apply_matrix(field, g, &v.coords),
            weights: v.weights.clone(),
        };
        for mu in cochar_reps {
            if mu.is_zero() {
                continue;
            }
            if negative_weight_set(field, mu, &moved).is_empty() {
                let cert = Destabilizer {
                    word: word.clone(),
                    cochar: mu.clone(),
                };
                debug_assert!(verify_destabilizer(field, v, generators, &cert));
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Re-verify a certificate from scratch: apply the word, recompute the
/// negative-weight set, check emptiness and nontriviality.
pub fn verify_destabilizer(
    field: &Fq,
    v: &WeightedVector<Fq>,
    generators: &[Vec<Vec<u16>>],
    cert: &Destabilizer,
) -> bool {
    if cert.cochar.is_zero() {
        return false;
    }
    let mut coords = v.coords.clone();
    for &gi in cert.word.iter().rev() {
        coords = apply_matrix(field, &generators[gi], &coords);
    }
    let moved = WeightedVector::<Fq> {
        coords,
        weights: v.weights.clone(),
    };
    negative_weight_set(field, &cert.cochar, &moved).is_empty()
}

/// Orbit closure of `v` under the generators, plus the stabilizer order
/// when the group order is supplied. The orbit is returned sorted.
pub fn orbit(
    field: &Fq,
    coords: &[u16],
    generators: &[Vec<Vec<u16>>],
    group_order: Option<u64>,
    budget: usize,
) -> Result<(Vec<Vec<u16>>, Option<u64>), Error> {
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    seen.insert(coords.to_vec());
    let mut queue = vec![coords.to_vec()];
    while let Some(cur) = queue.pop() {
        for g in generators {
            let next = apply_matrix(field, g, &cur);
            if seen.insert(next.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExhausted);
                }
                queue.push(next);
            }
        }
    }
    let size = seen.len() as u64;
    let stab = group_order.map(|n| n / size);
    Ok((seen.into_iter().collect(), stab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::IntRing;
    use crate::rng::XorShift64Star;
    use num_bigint::BigInt;

    fn wv_int(pairs: &[(Vec<i64>, i64)]) -> WeightedVector<IntRing> {
        WeightedVector {
            coords: pairs.iter().map(|(_, c)| BigInt::from(*c)).collect(),
            weights: pairs.iter().map(|(w, _)| w.clone()).collect(),
        }
    }

    #[test]
    fn negative_set_examples() {
        let r = IntRing;
        let zero = wv_int(&[(vec![1, 0], 0)]);
        let lam = Cocharacter { vector: vec![1, 3] };
        assert!(negative_weight_set(&r, &lam, &zero).is_empty());
        // single present weight 3r+s at (r,s) = (1,3)
        let v = wv_int(&[(vec![3, 1], 1)]);
        assert!(negative_weight_set(&r, &lam, &v).is_empty());
        let lam2 = Cocharacter {
            vector: vec![-1, 0],
        };
        assert_eq!(
            negative_weight_set(&r, &lam2, &v),
            BTreeSet::from([-3])
        );
        let lam0 = Cocharacter { vector: vec![0, 0] };
        assert!(negative_weight_set(&r, &lam0, &v).is_empty());
    }

    #[test]
    fn torus_stability_examples() {
        let r = IntRing;
        assert!(!torus_stable(&r, &wv_int(&[(vec![1], 0)]), 1).unwrap());
        assert!(torus_stable(&r, &wv_int(&[(vec![1], 1), (vec![-1], 1)]), 1).unwrap());
        // all eight G2 torus weights present
        let mut pairs = Vec::new();
        for sr in [1i64, -1] {
            for ss in [1i64, -1] {
                pairs.push((vec![3 * sr, ss], 1));
                pairs.push((vec![sr, ss], 1));
            }
        }
        assert!(torus_stable(&r, &wv_int(&pairs), 2).unwrap());
    }

    #[test]
    fn torus_semistability_examples() {
        let r = IntRing;
        assert!(!torus_semistable(&r, &wv_int(&[(vec![1], 0)]), 1).unwrap());
        assert!(!torus_semistable(&r, &wv_int(&[(vec![1], 1)]), 1).unwrap());
        assert!(torus_semistable(&r, &wv_int(&[(vec![1], 1), (vec![-2], 1)]), 1).unwrap());
        // supported on 3r+s, 3r-s, r+s, r-s only: lambda = (1,0) kills it
        let pairs = vec![
            (vec![3, 1], 1),
            (vec![3, -1], 1),
            (vec![1, 1], 1),
            (vec![1, -1], 1),
        ];
        assert!(!torus_semistable(&r, &wv_int(&pairs), 2).unwrap());
    }

    #[test]
    fn stable_implies_semistable_on_random_inputs() {
        let r = IntRing;
        let mut rng = XorShift64Star::new(11);
        for _ in 0..200 {
            let n = 1 + (rng.next_u64() % 5) as usize;
            let pairs: Vec<(Vec<i64>, i64)> = (0..n)
                .map(|_| {
                    (
                        vec![rng.int_in(-3, 3), rng.int_in(-3, 3)],
                        rng.int_in(0, 1),
                    )
                })
                .collect();
            let v = wv_int(&pairs);
            if torus_stable(&r, &v, 2).unwrap() {
                assert!(torus_semistable(&r, &v, 2).unwrap());
            }
        }
    }

    #[test]
    fn stability_invariant_under_dualization() {
        let r = IntRing;
        let mut rng = XorShift64Star::new(12);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let pairs: Vec<(Vec<i64>, i64)> = (0..n)
                .map(|_| (vec![rng.int_in(-3, 3), rng.int_in(-3, 3)], 1))
                .collect();
            let dual: Vec<(Vec<i64>, i64)> = pairs
                .iter()
                .map(|(w, c)| (w.iter().map(|&x| -x).collect(), *c))
                .collect();
            assert_eq!(
                torus_stable(&r, &wv_int(&pairs), 2).unwrap(),
                torus_stable(&r, &wv_int(&dual), 2).unwrap()
            );
        }
    }

    #[test]
    fn reduction_shrinks_negative_sets() {
        let r = IntRing;
        let f = Fq::new(3, 1).unwrap();
        let mut rng = XorShift64Star::new(13);
        for _ in 0..100 {
            let weights: Vec<Vec<i64>> =
                (0..4).map(|_| vec![rng.int_in(-2, 2), rng.int_in(-2, 2)]).collect();
            let ints: Vec<i64> = (0..4).map(|_| rng.int_in(-4, 4)).collect();
            let v = WeightedVector::<IntRing> {
                coords: ints.iter().map(|&c| BigInt::from(c)).collect(),
                weights: weights.clone(),
            };
            let vbar = WeightedVector::<Fq> {
                coords: ints.iter().map(|&c| f.from_i64(c)).collect(),
                weights,
            };
            let mu = Cocharacter {
                vector: vec![rng.int_in(-3, 3), rng.int_in(-3, 3)],
            };
            let big = negative_weight_set(&r, &mu, &v);
            let small = negative_weight_set(&f, &mu, &vbar);
            assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn conjugation_identity_for_sl2_torus() {
        // SL2 on its standard 2-space, weights +1 and -1 for the diagonal
        // torus; w = antidiagonal Weyl element conjugates lambda to -lambda
        let f = Fq::new(5, 1).unwrap();
        // w = [[0,1],[-1,0]] mod 5, so w lambda w^-1 = -lambda
        let w_inv = vec![vec![0u16, 4], vec![1, 0]];
        for a in f.elements() {
            for b in f.elements() {
                let v = WeightedVector::<Fq> {
                    coords: vec![a, b],
                    weights: vec![vec![1], vec![-1]],
                };
                for l in -2i64..=2 {
                    let lam = Cocharacter { vector: vec![l] };
                    let conj = Cocharacter { vector: vec![-l] }; // w lam w^-1
                    let moved = WeightedVector::<Fq> {
                        coords: apply_matrix(&f, &w_inv, &v.coords),
                        weights: v.weights.clone(),
                    };
                    assert_eq!(
                        negative_weight_set(&f, &conj, &v),
                        negative_weight_set(&f, &lam, &moved)
                    );
                }
            }
        }
    }

    #[test]
    fn zero_vector_gets_identity_certificate() {
        let f = Fq::new(2, 1).unwrap();
        let v = WeightedVector::<Fq> {
            coords: vec![0, 0],
            weights: vec![vec![1], vec![-1]],
        };
        let gens = vec![vec![vec![1u16, 1], vec![0, 1]]];
        let reps = cone::chamber_cocharacters(&[vec![1], vec![-1]], 1).unwrap();
        let cert = find_destabilizer(&f, &v, &gens, &reps, 100)
            .unwrap()
            .expect("zero vector is destabilized");
        assert!(cert.word.is_empty());
        assert!(verify_destabilizer(&f, &v, &gens, &cert));
    }

    #[test]
    fn budget_exhaustion_is_distinguished() {
        let f = Fq::new(7, 1).unwrap();
        // the two standard unipotents generate all of SL2(F7), order 336
        let gens = vec![
            vec![vec![1u16, 1], vec![0, 1]],
            vec![vec![1u16, 0], vec![1, 1]],
        ];
        assert!(matches!(
            group_closure(&f, &gens, 2, 10),
            Err(Error::BudgetExhausted)
        ));
        let full = group_closure(&f, &gens, 2, 1000).unwrap();
        assert_eq!(full.len(), 336);
    }

    #[test]
    fn orbit_closure_and_stabilizer() {
        let f = Fq::new(2, 1).unwrap();
        let gens = vec![
            vec![vec![1u16, 1], vec![0, 1]],
            vec![vec![1u16, 0], vec![1, 1]],
        ];
        // nonzero vectors of F2^2 form one orbit of size 3 under SL2(F2)
        let (orb, stab) = orbit(&f, &[1, 0], &gens, Some(6), 100).unwrap();
        assert_eq!(orb.len(), 3);
        assert_eq!(stab, Some(2));
        let (zorb, _) = orbit(&f, &[0, 0], &gens, Some(6), 100).unwrap();
        assert_eq!(zorb, vec![vec![0, 0]]);
        // generator-order independence
        let gens_rev: Vec<_> = gens.iter().rev().cloned().collect();
        let (orb2, _) = orbit(&f, &[1, 0], &gens_rev, Some(6), 100).unwrap();
        assert_eq!(orb, orb2);
    }
}
