//! Root systems of the simple types, affine roots, and rational apartment
//! points.
//!
//! Roots are stored in simple-root coordinates and coroots in simple-coroot
//! coordinates. The pairing convention is `<alpha_i, alphacheck_j> =
//! cartan[j][i]`, so the Cartan matrix entry `cartan[i][j]` is
//! `2(alpha_i, alpha_j)/(alpha_i, alpha_i)`. Everything is exact: integer
//! coordinates, `Ratio<i64>` pairings, no tolerances.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Exact rational scalar used for apartment coordinates and pairings.
pub type Rat = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A valid simple type `(family, rank)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemType {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, Error> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok && rank <= 8 {
            Ok(RootSystemType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family}{rank}")))
        }
    }

    /// Cartan matrix with `cartan[i][j] = 2(alpha_i,alpha_j)/(alpha_i,alpha_i)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for i in 0..n {
            c[i][i] = 2;
        }
        let mut chain = |i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            Family::A => {
                for i in 0..n - 1 {
                    chain(i, i + 1);
                }
            }
            Family::B => {
                for i in 0..n - 1 {
                    chain(i, i + 1);
                }
                // alpha_{n-1} short: <alpha_{n-2}, coroot of alpha_{n-1}> = -2
                c[n - 1][n - 2] = -2;
            }
            Family::C => {
                for i in 0..n - 1 {
                    chain(i, i + 1);
                }
                c[n - 2][n - 1] = -2;
            }
            Family::D => {
                for i in 0..n - 2 {
                    chain(i, i + 1);
                }
                chain(n - 3, n - 1);
            }
            Family::E => {
                // Bourbaki numbering: node 2 attaches to node 4 (1-based).
                chain(0, 2);
                chain(2, 3);
                chain(1, 3);
                chain(3, 4);
                chain(4, 5);
                if n >= 7 {
                    chain(5, 6);
                }
                if n >= 8 {
                    chain(6, 7);
                }
            }
            Family::F => {
                chain(0, 1);
                chain(2, 3);
                // alpha_2 long, alpha_3 short (1-based: alpha_2, alpha_3)
                c[1][2] = -1;
                c[2][1] = -2;
            }
            Family::G => {
                // alpha_1 short, alpha_2 long
                c[0][1] = -3;
                c[1][0] = -1;
            }
        }
        c
    }

    /// Order of the Weyl group, from the classification.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        RootSystemType::new(fam, rank)
    }
}

/// An affine root `psi = alpha + n`, stored as a root index plus level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub gradient: usize,
    pub level: i64,
}

/// A rational point `x = x_0 + v` of the standard apartment, with its order
/// and first positive affine-root value cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentPoint {
    pub offset: Vec<Rat>,
    order: u64,
    r_of_x: Rat,
}

impl ApartmentPoint {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn r_of_x(&self) -> Rat {
        self.r_of_x
    }
}

/// Root datum of a simple split group: roots, coroots, Cartan pairing,
/// positive system, and the half-sum of positive coroots.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub ty: RootSystemType,
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub positives: Vec<usize>,
    pub highest_root: usize,
    pub rho_check: Vec<Rat>,
    index: HashMap<Vec<i64>, usize>,
    /// `(alpha_i, alpha_i)/2`, normalized so the first simple root has value 1.
    symmetrizer: Vec<Rat>,
}

/// Generate the full root set as the reflection closure of the simple roots.
pub fn build_root_system(ty: RootSystemType) -> RootDatum {
    let n = ty.rank;
    let cartan = ty.cartan_matrix();

    // Closure under simple reflections, roots and coroots in parallel.
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut coroots: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for i in 0..n {
        let mut r = vec![0i64; n];
        r[i] = 1;
        index.insert(r.clone(), i);
        roots.push(r);
        let mut cr = vec![0i64; n];
        cr[i] = 1;
        coroots.push(cr);
    }
    let mut head = 0;
    while head < roots.len() {
        for i in 0..n {
            let r = simple_reflect_root(&cartan, i, &roots[head]);
            if !index.contains_key(&r) {
                let cr = simple_reflect_coroot(&cartan, i, &coroots[head]);
                index.insert(r.clone(), roots.len());
                roots.push(r);
                coroots.push(cr);
            }
        }
        head += 1;
    }

    let positives: Vec<usize> = (0..roots.len())
        .filter(|&k| roots[k].iter().all(|&c| c >= 0))
        .collect();
    debug_assert_eq!(2 * positives.len(), roots.len());

    let highest_root = *positives
        .iter()
        .max_by_key(|&&k| roots[k].iter().sum::<i64>())
        .expect("nonempty root system");

    // rho_check solves <alpha_i, rho_check> = 1 for all i.
    let m: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| Rat::from_integer(cartan[j][i])).collect())
        .collect();
    let rhs: Vec<Rat> = vec![Rat::one(); n];
    let rho_check = solve_rational(m, rhs).expect("Cartan matrix is invertible");

    // Symmetrizer d_i with d_i * cartan[i][j] = d_j * cartan[j][i].
    let mut symmetrizer = vec![Rat::zero(); n];
    symmetrizer[0] = Rat::one();
    let mut placed = vec![false; n];
    placed[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            if !placed[i] {
                continue;
            }
            for j in 0..n {
                if !placed[j] && cartan[i][j] != 0 {
                    symmetrizer[j] = symmetrizer[i] * Rat::new(cartan[i][j], cartan[j][i]);
                    placed[j] = true;
                    changed = true;
                }
            }
        }
    }
    debug_assert!(placed.iter().all(|&p| p));

    RootDatum {
        ty,
        cartan,
        roots,
        coroots,
        positives,
        highest_root,
        rho_check,
        index,
        symmetrizer,
    }
}

fn simple_reflect_root(cartan: &[Vec<i64>], i: usize, root: &[i64]) -> Vec<i64> {
    let mut out = root.to_vec();
    let pairing: i64 = (0..root.len()).map(|j| cartan[i][j] * root[j]).sum();
    out[i] -= pairing;
    out
}

fn simple_reflect_coroot(cartan: &[Vec<i64>], i: usize, coroot: &[i64]) -> Vec<i64> {
    let mut out = coroot.to_vec();
    let pairing: i64 = (0..coroot.len()).map(|j| cartan[j][i] * coroot[j]).sum();
    out[i] -= pairing;
    out
}

fn solve_rational(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
        }
        b[col] /= p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..n {
                    let s = m[col][j] * f;
                    m[r][j] -= s;
                }
                let s = b[col] * f;
                b[r] -= s;
            }
        }
    }
    Some(b)
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_root_sum(&self, a: usize, b: usize) -> Option<usize> {
        let sum: Vec<i64> = self.roots[a]
            .iter()
            .zip(&self.roots[b])
            .map(|(x, y)| x + y)
            .collect();
        self.root_index(&sum)
    }

    pub fn negative_of(&self, a: usize) -> usize {
        let neg: Vec<i64> = self.roots[a].iter().map(|c| -c).collect();
        self.root_index(&neg).expect("root set is symmetric")
    }

    pub fn height(&self, a: usize) -> i64 {
        self.roots[a].iter().sum()
    }

    /// `(alpha, beta)` in the normalization where the first simple root has
    /// squared length 2.
    pub fn inner(&self, a: usize, b: usize) -> Rat {
        let ra = &self.roots[a];
        let rb = &self.roots[b];
        let n = self.rank();
        let mut acc = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                if ra[i] != 0 && rb[j] != 0 {
                    acc += self.symmetrizer[i]
                        * Rat::from_integer(self.cartan[i][j])
                        * Rat::from_integer(ra[i] * rb[j]);
                }
            }
        }
        acc
    }

    /// `<weight, coweight>` with the weight in root coordinates and the
    /// coweight in coroot coordinates.
    pub fn pairing(&self, weight: &[Rat], coweight: &[Rat]) -> Result<Rat, Error> {
        let n = self.rank();
        if weight.len() != n || coweight.len() != n {
            return Err(Error::DimensionMismatch);
        }
        let mut acc = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                acc += weight[i] * coweight[j] * Rat::from_integer(self.cartan[j][i]);
            }
        }
        Ok(acc)
    }

    /// Integer pairing `<alpha, alphacheck_j-component coweight>` for a stored
    /// root against an integer coweight.
    pub fn pairing_root_int(&self, root: usize, coweight: &[i64]) -> i64 {
        let n = self.rank();
        let r = &self.roots[root];
        let mut acc = 0i64;
        for i in 0..n {
            for j in 0..n {
                acc += r[i] * coweight[j] * self.cartan[j][i];
            }
        }
        acc
    }

    /// `<alpha, alphacheck_j>` for a stored root.
    pub fn root_coroot_pairing(&self, root: usize, j: usize) -> i64 {
        let r = &self.roots[root];
        (0..self.rank()).map(|i| r[i] * self.cartan[j][i]).sum()
    }

    fn root_pairing_with_offset(&self, root: usize, offset: &[Rat]) -> Rat {
        let n = self.rank();
        let r = &self.roots[root];
        let mut acc = Rat::zero();
        for i in 0..n {
            if r[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += Rat::from_integer(r[i] * self.cartan[j][i]) * offset[j];
            }
        }
        acc
    }

    /// Build a rational apartment point `x_0 + offset`, caching its order and
    /// `r(x)`.
    pub fn apartment_point(&self, offset: Vec<Rat>) -> Result<ApartmentPoint, Error> {
        if offset.len() != self.rank() {
            return Err(Error::DimensionMismatch);
        }
        let mut order: u64 = 1;
        let mut r_min: Option<Rat> = None;
        for k in 0..self.num_roots() {
            let v = self.root_pairing_with_offset(k, &offset);
            order = num_integer::lcm(order, *v.denom() as u64);
            let frac = fractional_part(v);
            if !frac.is_zero() {
                r_min = Some(match r_min {
                    Some(cur) if cur <= frac => cur,
                    _ => frac,
                });
            }
        }
        let r_of_x = r_min.unwrap_or_else(Rat::one);
        Ok(ApartmentPoint {
            offset,
            order,
            r_of_x,
        })
    }

    /// `psi(x)` for `psi = alpha + n`.
    pub fn eval_affine_root(&self, psi: AffineRoot, x: &ApartmentPoint) -> Rat {
        self.root_pairing_with_offset(psi.gradient, &x.offset) + Rat::from_integer(psi.level)
    }

    /// `<alpha, offset>` for a stored root against a rational coweight.
    pub fn root_value(&self, root: usize, x: &ApartmentPoint) -> Rat {
        self.root_pairing_with_offset(root, &x.offset)
    }

    fn alcove_violations(&self, offset: &[Rat]) -> Vec<(usize, Rat)> {
        let mut out = Vec::new();
        let theta = self.root_pairing_with_offset(self.highest_root, offset);
        if theta > Rat::one() {
            out.push((0, theta - Rat::one()));
        }
        for (w, &i) in self.simple_indices().iter().enumerate() {
            let v = self.root_pairing_with_offset(i, offset);
            if v < Rat::zero() {
                out.push((w + 1, -v));
            }
        }
        out
    }

    fn simple_indices(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|i| {
                let mut coords = vec![0i64; self.rank()];
                coords[i] = 1;
                self.root_index(&coords).expect("simple roots are roots")
            })
            .collect()
    }

    /// Apply the affine reflection with wall index `w` (0 = the wall
    /// `theta(x) = 1`, `i >= 1` the wall `alpha_i(x) = 0`).
    pub fn apply_affine_reflection(&self, w: usize, offset: &[Rat]) -> Vec<Rat> {
        let mut out = offset.to_vec();
        if w == 0 {
            let theta = self.root_pairing_with_offset(self.highest_root, offset);
            let t = theta - Rat::one();
            let theta_check = &self.coroots[self.highest_root];
            for j in 0..self.rank() {
                out[j] -= t * Rat::from_integer(theta_check[j]);
            }
        } else {
            // alphacheck_i is the i-th coroot basis vector, so only the i-th
            // coordinate moves.
            let i = w - 1;
            let si = self.simple_indices()[i];
            let v = self.root_pairing_with_offset(si, offset);
            out[i] = offset[i] - v;
        }
        out
    }

    /// Reduce `x` into the closed fundamental alcove by reflecting across the
    /// most-violated wall, ties broken by lowest wall index. The returned word
    /// `w_1, ..., w_k` satisfies `s_{w_1}(...(s_{w_k}(out))) = x`.
    pub fn reduce_to_alcove(&self, x: &ApartmentPoint) -> (ApartmentPoint, Vec<usize>) {
        let mut offset = x.offset.clone();
        let mut word = Vec::new();
        loop {
            let violations = self.alcove_violations(&offset);
            let Some(&(w, _)) = violations
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            else {
                break;
            };
            offset = self.apply_affine_reflection(w, &offset);
            word.push(w);
        }
        word.reverse();
        let point = self
            .apartment_point(offset)
            .expect("reflection preserves rank");
        (point, word)
    }

    /// Whether `x` satisfies the closed-alcove inequalities.
    pub fn in_alcove(&self, x: &ApartmentPoint) -> bool {
        self.alcove_violations(&x.offset).is_empty()
    }

    /// Normalized Kac coordinates `(s_0, s_1, ..., s_l)` of an alcove point of
    /// order `m`: `s_i = m * alpha_i(x)` and `s_0 = m * (1 - theta(x))`.
    pub fn kac_coordinates(&self, x: &ApartmentPoint) -> Result<Vec<i64>, Error> {
        if !self.in_alcove(x) {
            return Err(Error::NotInAlcove);
        }
        let m = Rat::from_integer(x.order() as i64);
        let theta = self.root_pairing_with_offset(self.highest_root, &x.offset);
        let mut out = Vec::with_capacity(self.rank() + 1);
        let s0 = m * (Rat::one() - theta);
        out.push(rat_to_int(s0)?);
        for &i in &self.simple_indices() {
            let v = m * self.root_pairing_with_offset(i, &x.offset);
            out.push(rat_to_int(v)?);
        }
        Ok(out)
    }

    /// Coefficients of the highest root in the simple roots.
    pub fn highest_root_coeffs(&self) -> Vec<i64> {
        self.roots[self.highest_root].clone()
    }

    /// JSON form of the datum (exact rationals as strings).
    pub fn json_report(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.ty.to_string(),
            "rank": self.rank(),
            "cartan": self.cartan,
            "roots": self.roots,
            "coroots": self.coroots,
            "positives": self.positives,
            "highest_root": self.highest_root,
            "rho_check": self.rho_check.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn fractional_part(v: Rat) -> Rat {
    let f = v - v.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

fn rat_to_int(v: Rat) -> Result<i64, Error> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::Internal(format!("expected integer, got {v}")))
    }
}

/// Convenience: the point `x_0 + rho_check / m`.
pub fn rho_over(datum: &RootDatum, m: i64) -> ApartmentPoint {
    let offset: Vec<Rat> = datum
        .rho_check
        .iter()
        .map(|r| r / Rat::from_integer(m))
        .collect();
    datum.apartment_point(offset).expect("rank matches")
}
