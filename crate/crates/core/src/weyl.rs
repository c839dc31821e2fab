//! Weyl group enumeration and the elliptic / Z-regular classification.
//!
//! Elements are stored as permutations of the root indices (fast composition
//! and orbit logic) together with the integer matrix acting on the
//! cocharacter lattice (needed for ellipticity).

use std::collections::HashMap;

use crate::error::Error;
use crate::rootdata::RootDatum;

pub const DEFAULT_CEILING: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Permutation of root indices: root `k` maps to `root_perm[k]`.
    pub root_perm: Vec<usize>,
    /// Matrix acting on the coroot lattice, columns in coroot coordinates.
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(datum: &RootDatum) -> Self {
        let n = datum.rank();
        let mut matrix = vec![vec![0i64; n]; n];
        for i in 0..n {
            matrix[i][i] = 1;
        }
        WeylElement {
            root_perm: (0..datum.num_roots()).collect(),
            matrix,
        }
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let root_perm = other.root_perm.iter().map(|&k| self.root_perm[k]).collect();
        let n = self.matrix.len();
        let mut matrix = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0i64;
                for k in 0..n {
                    acc += self.matrix[i][k] * other.matrix[k][j];
                }
                matrix[i][j] = acc;
            }
        }
        WeylElement { root_perm, matrix }
    }

    pub fn order(&self) -> u64 {
        let mut p: Vec<usize> = self.root_perm.clone();
        let id: Vec<usize> = (0..p.len()).collect();
        let mut ord = 1u64;
        while p != id {
            p = p.iter().map(|&k| self.root_perm[k]).collect();
            ord += 1;
        }
        ord
    }

    fn perm_power_has_fixed_point(&self, j: u64) -> bool {
        let n = self.root_perm.len();
        (0..n).any(|start| {
            let mut k = start;
            for _ in 0..j {
                k = self.root_perm[k];
            }
            k == start
        })
    }
}

/// Simple reflection `s_i` as a Weyl element.
pub fn simple_reflection(datum: &RootDatum, i: usize) -> WeylElement {
    let n = datum.rank();
    // s_i on the coroot lattice: v_i <- v_i - sum_j cartan[j][i] v_j
    let mut matrix = vec![vec![0i64; n]; n];
    for r in 0..n {
        matrix[r][r] = 1;
    }
    for j in 0..n {
        matrix[i][j] -= datum.cartan[j][i];
    }
    let root_perm = (0..datum.num_roots())
        .map(|k| {
            let mut coords = datum.roots[k].clone();
            let pairing: i64 = (0..n).map(|j| datum.cartan[i][j] * coords[j]).sum();
            coords[i] -= pairing;
            datum.root_index(&coords).expect("reflection closure")
        })
        .collect();
    WeylElement { root_perm, matrix }
}

/// Enumerate the full Weyl group as the closure of the simple reflections.
pub fn generate_weyl(datum: &RootDatum, ceiling: u64) -> Result<Vec<WeylElement>, Error> {
    let predicted = datum.ty.weyl_order();
    if predicted > ceiling {
        return Err(Error::GroupTooLarge {
            order: predicted,
            ceiling,
        });
    }
    let gens: Vec<WeylElement> = (0..datum.rank())
        .map(|i| simple_reflection(datum, i))
        .collect();
    let id = WeylElement::identity(datum);
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(id.root_perm.clone(), 0);
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        for g in &gens {
            let next = g.compose(&elements[head]);
            if !seen.contains_key(&next.root_perm) {
                seen.insert(next.root_perm.clone(), elements.len());
                elements.push(next);
            }
        }
        head += 1;
    }
    debug_assert_eq!(elements.len() as u64, predicted);
    Ok(elements)
}

/// `w` is elliptic iff it fixes no nonzero vector of the cocharacter lattice,
/// i.e. `det(w - 1) != 0`.
pub fn is_elliptic(w: &WeylElement) -> bool {
    let n = w.matrix.len();
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| w.matrix[i][j] as i128).collect())
        .collect();
    for i in 0..n {
        m[i][i] -= 1;
    }
    det_i128(m) != 0
}

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    // fraction-free Bareiss elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// `w` is Z-regular iff the cyclic group it generates acts freely on the
/// roots: no proper power fixes a root.
pub fn is_z_regular(w: &WeylElement) -> bool {
    let ord = w.order();
    if ord == 1 {
        // the identity fixes every root
        return w.root_perm.is_empty();
    }
    (1..ord).all(|j| !w.perm_power_has_fixed_point(j))
}

/// Sorted set of orders of elliptic Z-regular Weyl elements.
pub fn regular_elliptic_orders(datum: &RootDatum, ceiling: u64) -> Result<Vec<u64>, Error> {
    let elements = generate_weyl(datum, ceiling)?;
    let mut orders: Vec<u64> = elements
        .iter()
        .filter(|w| is_elliptic(w) && is_z_regular(w))
        .map(|w| w.order())
        .collect();
    orders.sort_unstable();
    orders.dedup();
    Ok(orders)
}

/// Product of the simple reflections in index order.
pub fn coxeter_element(datum: &RootDatum) -> WeylElement {
    (0..datum.rank()).fold(WeylElement::identity(datum), |acc, i| {
        acc.compose(&simple_reflection(datum, i))
    })
}
