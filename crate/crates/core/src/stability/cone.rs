//! Chamber and face representatives of a weight hyperplane arrangement.
//!
//! Emptiness of the negative-weight set I(lambda, v) depends only on the
//! signs of the pairings of lambda with the present weights, so it is
//! constant on each open chamber and each face of the arrangement
//! { lambda : <w, lambda> = 0 }. One primitive integer representative per
//! nonzero face is therefore a complete test set for the fixed torus,
//! replacing the quantifier over all one-parameter subgroups.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::Error;

use super::Cocharacter;

type Q = Ratio<i64>;

const MAX_RANK: usize = 3;

/// One primitive integer cocharacter per chamber and per nonzero face of
/// the arrangement cut out by `weights`. Zero weights contribute no
/// hyperplane; with no hyperplanes at all the single representative is a
/// nonzero lattice vector.
pub fn chamber_cocharacters(weights: &[Vec<i64>], rank: usize) -> Result<Vec<Cocharacter>, Error> {
    if rank > MAX_RANK {
        return Err(Error::RankTooLarge(rank));
    }
    // hyperplane normals: distinct present weights, primitive, up to sign
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for w in weights {
        if w.iter().all(|&c| c == 0) {
            continue;
        }
        let mut n = primitive(w.clone());
        // canonical sign: first nonzero entry positive
        if n.iter().find(|&&c| c != 0).map(|&c| c < 0).unwrap_or(false) {
            n.iter_mut().for_each(|c| *c = -*c);
        }
        if !normals.contains(&n) {
            normals.push(n);
        }
    }
    normals.sort();

    let h = normals.len();
    let mut reps = Vec::new();
    let mut signs = vec![0i8; h];
    enumerate_signs(&normals, rank, &mut signs, 0, &mut reps);
    Ok(reps)
}

fn enumerate_signs(
    normals: &[Vec<i64>],
    rank: usize,
    signs: &mut Vec<i8>,
    pos: usize,
    out: &mut Vec<Cocharacter>,
) {
    if pos == normals.len() {
        if let Some(v) = face_witness(normals, signs, rank) {
            out.push(Cocharacter { vector: v });
        }
        return;
    }
    for s in [-1i8, 0, 1] {
        signs[pos] = s;
        enumerate_signs(normals, rank, signs, pos + 1, out);
    }
}

/// Integer point with the prescribed sign pattern, or `None` if the face is
/// empty or reduced to the origin.
fn face_witness(normals: &[Vec<i64>], signs: &[i8], rank: usize) -> Option<Vec<i64>> {
    // kernel of the equality normals, as columns of a rational basis
    let eq: Vec<&Vec<i64>> = normals
        .iter()
        .zip(signs)
        .filter(|(_, &s)| s == 0)
        .map(|(n, _)| n)
        .collect();
    let kernel = kernel_basis(&eq, rank);
    if kernel.is_empty() {
        return None;
    }
    // strict constraints pulled back to kernel coordinates
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (n, &s) in normals.iter().zip(signs) {
        if s == 0 {
            continue;
        }
        let row: Vec<Q> = kernel
            .iter()
            .map(|b| {
                let dot: Q = n
                    .iter()
                    .zip(b)
                    .map(|(&c, x)| Q::from_integer(c) * x)
                    .sum();
                dot * Q::from_integer(s as i64)
            })
            .collect();
        rows.push(row);
    }
    let y = strict_feasible(rows, kernel.len())?;
    if y.iter().all(|c| c.is_zero()) {
        return None;
    }
    let mut v = vec![Q::zero(); rank];
    for (b, c) in kernel.iter().zip(&y) {
        for i in 0..rank {
            v[i] += b[i] * c;
        }
    }
    Some(primitive(clear_denominators(&v)))
}

/// Rational basis of the joint kernel of the given integer rows.
fn kernel_basis(rows: &[&Vec<i64>], rank: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| Q::from_integer(c)).collect())
        .collect();
    let mut pivot_col = Vec::new();
    let mut r = 0;
    for c in 0..rank {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c];
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / pv;
                for j in 0..rank {
                    let s = m[r][j] * f;
                    m[i][j] -= s;
                }
            }
        }
        pivot_col.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..rank).filter(|c| !pivot_col.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut b = vec![Q::zero(); rank];
            b[fc] = Q::from_integer(1);
            for (row, &pc) in pivot_col.iter().enumerate() {
                b[pc] = -m[row][fc] / m[row][pc];
            }
            b
        })
        .collect()
}

/// Fraction-exact Fourier-Motzkin for the homogeneous strict system
/// `row . y > 0`; returns a witness or `None` if infeasible.
fn strict_feasible(rows: Vec<Vec<Q>>, dim: usize) -> Option<Vec<Q>> {
    if dim == 0 {
        return if rows.is_empty() { Some(vec![]) } else { None };
    }
    if rows.iter().any(|r| r.iter().all(|c| c.is_zero())) {
        return None; // derived constraint 0 > 0
    }
    if dim == 1 {
        let has_pos = rows.iter().any(|r| r[0].is_positive());
        let has_neg = rows.iter().any(|r| r[0].is_negative());
        return match (has_pos, has_neg) {
            (true, true) => None,
            (false, true) => Some(vec![Q::from_integer(-1)]),
            _ => Some(vec![Q::from_integer(1)]),
        };
    }
    let k = dim - 1; // eliminate the last variable
    let mut lower = Vec::new(); // rows with positive coefficient at k
    let mut upper = Vec::new();
    let mut reduced = Vec::new();
    for r in &rows {
        if r[k].is_positive() {
            lower.push(r);
        } else if r[k].is_negative() {
            upper.push(r);
        } else {
            reduced.push(r[..k].to_vec());
        }
    }
    for lo in &lower {
        for up in &upper {
            // combine so the k-coefficient cancels; strictness is preserved
            let row: Vec<Q> = (0..k)
                .map(|j| lo[j] * (-up[k]) + up[j] * lo[k])
                .collect();
            reduced.push(row);
        }
    }
    let mut y = strict_feasible(reduced, k)?;
    // back-substitute: lo . y_partial + lo[k] * y_k > 0 gives a lower bound
    let lb = lower
        .iter()
        .map(|r| {
            let partial: Q = (0..k).map(|j| r[j] * y[j]).sum();
            -partial / r[k]
        })
        .fold(None::<Q>, |acc, b| Some(acc.map_or(b, |a| a.max(b))));
    let ub = upper
        .iter()
        .map(|r| {
            let partial: Q = (0..k).map(|j| r[j] * y[j]).sum();
            -partial / r[k]
        })
        .fold(None::<Q>, |acc, b| Some(acc.map_or(b, |a| a.min(b))));
    let yk = match (lb, ub) {
        (Some(l), Some(u)) => {
            debug_assert!(l < u);
            (l + u) / Q::from_integer(2)
        }
        (Some(l), None) => l + Q::from_integer(1),
        (None, Some(u)) => u - Q::from_integer(1),
        (None, None) => Q::zero(),
    };
    y.push(yk);
    Some(y)
}

fn clear_denominators(v: &[Q]) -> Vec<i64> {
    let lcm = v
        .iter()
        .map(|c| *c.denom())
        .fold(1i64, num_integer::lcm);
    v.iter().map(|c| (c * Q::from_integer(lcm)).to_integer()).collect()
}

fn primitive(mut v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &c| num_integer::gcd(acc, c));
    if g > 1 {
        v.iter_mut().for_each(|c| *c /= g);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_pattern(weights: &[Vec<i64>], lam: &[i64]) -> Vec<i8> {
        weights
            .iter()
            .map(|w| {
                let d: i64 = w.iter().zip(lam).map(|(&a, &b)| a * b).sum();
                d.signum() as i8
            })
            .collect()
    }

    #[test]
    fn rank_one_pair() {
        let reps = chamber_cocharacters(&[vec![1], vec![-1]], 1).unwrap();
        let mut vs: Vec<Vec<i64>> = reps.into_iter().map(|c| c.vector).collect();
        vs.sort();
        assert_eq!(vs, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn no_hyperplanes_single_rep() {
        let reps = chamber_cocharacters(&[vec![0, 0]], 2).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].vector.iter().any(|&c| c != 0));
    }

    #[test]
    fn g2_weight_arrangement() {
        // the eight forms +-3r+-s, +-r+-s give four lines
        let mut weights = Vec::new();
        for sr in [1i64, -1] {
            for ss in [1i64, -1] {
                weights.push(vec![3 * sr, ss]);
                weights.push(vec![sr, ss]);
            }
        }
        let reps = chamber_cocharacters(&weights, 2).unwrap();
        assert_eq!(reps.len(), 16); // 8 chambers + 8 rays
        let on_line = |v: &Vec<i64>| {
            [(3i64, 1i64), (3, -1), (1, 1), (1, -1)]
                .iter()
                .filter(|(a, b)| a * v[0] + b * v[1] == 0)
                .count()
        };
        assert_eq!(reps.iter().filter(|c| on_line(&c.vector) == 0).count(), 8);
        assert_eq!(reps.iter().filter(|c| on_line(&c.vector) == 1).count(), 8);
        // the face representatives include the directions (1,3) and (1,1)
        // up to rescaling
        let dirs: Vec<Vec<i64>> = reps.iter().map(|c| primitive(c.vector.clone())).collect();
        assert!(dirs.contains(&vec![1, 3]) || dirs.contains(&vec![-1, -3]));
        assert!(dirs.contains(&vec![1, 1]) || dirs.contains(&vec![-1, -1]));
    }

    #[test]
    fn representatives_cover_all_reachable_sign_patterns() {
        let weights = vec![vec![1, 0, 0], vec![0, 1, -1], vec![1, -2, 1], vec![0, 0, 1]];
        let reps = chamber_cocharacters(&weights, 3).unwrap();
        let rep_patterns: std::collections::HashSet<Vec<i8>> = reps
            .iter()
            .map(|c| sign_pattern(&weights, &c.vector))
            .collect();
        assert_eq!(rep_patterns.len(), reps.len()); // distinct faces
        // every pattern hit by a grid scan must be represented
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    if (a, b, c) == (0, 0, 0) {
                        continue;
                    }
                    let pat = sign_pattern(&weights, &[a, b, c]);
                    assert!(rep_patterns.contains(&pat), "missing {pat:?}");
                }
            }
        }
    }

    #[test]
    fn rank_cap() {
        assert!(matches!(
            chamber_cocharacters(&[vec![1, 0, 0, 0]], 4),
            Err(Error::RankTooLarge(4))
        ));
    }
}
