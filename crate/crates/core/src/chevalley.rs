//! Chevalley-basis Lie algebra with integer structure constants.
//!
//! The basis is `{ e_alpha | alpha in Phi }` followed by `{ h_i | 1 <= i <=
//! rank }`. Structure-constant signs are fixed by the extraspecial-pair
//! method with positive roots totally ordered by height, then lexicographic
//! coordinates: every extraspecial pair gets `N = +(p+1)`, and all remaining
//! constants are forced by the antisymmetry, opposition, and four-root
//! relations. The Jacobi identity is verified exhaustively on basis triples
//! during construction.

use num_rational::Ratio;
use num_traits::Zero;
use std::collections::HashMap;

use crate::error::Error;
use crate::ring::Ring;
use crate::rootdata::{Rat, RootDatum};

/// Sparse Lie-algebra element over a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieVector<R: Ring> {
    pub coeffs: std::collections::BTreeMap<usize, R::Elem>,
}

impl<R: Ring> Default for LieVector<R> {
    fn default() -> Self {
        LieVector {
            coeffs: Default::default(),
        }
    }
}

impl<R: Ring> LieVector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(idx: usize, ring: &R) -> Self {
        let mut v = Self::zero();
        v.coeffs.insert(idx, ring.one());
        v
    }

    pub fn add_term(&mut self, ring: &R, idx: usize, c: R::Elem) {
        let entry = self
            .coeffs
            .entry(idx)
            .or_insert_with(|| ring.zero());
        *entry = ring.add(entry, &c);
        if ring.is_zero(entry) {
            self.coeffs.remove(&idx);
        }
    }

    pub fn scale(&self, ring: &R, c: &R::Elem) -> Self {
        let mut out = Self::zero();
        for (&i, v) in &self.coeffs {
            out.add_term(ring, i, ring.mul(v, c));
        }
        out
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, v) in &other.coeffs {
            out.add_term(ring, i, v.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

pub struct ChevalleyAlgebra {
    pub datum: RootDatum,
    /// `n_table[a][b] = N_{alpha_a, alpha_b}` when the root sum is a root,
    /// else 0.
    n_table: Vec<Vec<i64>>,
    /// `u_powers[a][i]` is the integer matrix of `(ad e_a)^i / i!`, stored
    /// column-sparse: for basis index `j`, the list of `(k, coeff)` terms.
    u_powers: Vec<Vec<Vec<Vec<(usize, i64)>>>>,
}

impl ChevalleyAlgebra {
    pub fn dim(&self) -> usize {
        self.datum.num_roots() + self.datum.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.datum.num_roots()
    }

    /// Basis index of `h_i`.
    pub fn h_index(&self, i: usize) -> usize {
        self.datum.num_roots() + i
    }

    pub fn n_constant(&self, a: usize, b: usize) -> i64 {
        self.n_table[a][b]
    }

    /// Bracket of two basis elements as an integer sparse vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        let nr = self.datum.num_roots();
        let rank = self.datum.rank();
        match (i < nr, j < nr) {
            (true, true) => {
                if self.datum.negative_of(i) == j {
                    // [e_alpha, e_{-alpha}] = h_{alphacheck}
                    (0..rank)
                        .filter(|&k| self.datum.coroots[i][k] != 0)
                        .map(|k| (nr + k, self.datum.coroots[i][k]))
                        .collect()
                } else if let Some(s) = self.datum.is_root_sum(i, j) {
                    vec![(s, self.n_table[i][j])]
                } else {
                    vec![]
                }
            }
            (false, true) => {
                // [h_k, e_beta] = <beta, alphacheck_k> e_beta
                let k = i - nr;
                let c = self.datum.root_coroot_pairing(j, k);
                if c != 0 {
                    vec![(j, c)]
                } else {
                    vec![]
                }
            }
            (true, false) => {
                let k = j - nr;
                let c = -self.datum.root_coroot_pairing(i, k);
                if c != 0 {
                    vec![(i, c)]
                } else {
                    vec![]
                }
            }
            (false, false) => vec![],
        }
    }

    /// Bilinear bracket over any supported coefficient ring.
    pub fn bracket<R: Ring>(&self, ring: &R, u: &LieVector<R>, v: &LieVector<R>) -> LieVector<R> {
        let mut out = LieVector::zero();
        for (&i, cu) in &u.coeffs {
            for (&j, cv) in &v.coeffs {
                let c = ring.mul(cu, cv);
                if ring.is_zero(&c) {
                    continue;
                }
                for (k, n) in self.bracket_basis(i, j) {
                    out.add_term(ring, k, ring.mul(&c, &ring.from_i64(n)));
                }
            }
        }
        out
    }

    /// `u_alpha(t) = exp(ad(t e_alpha))` applied to `v`. The divided-power
    /// integer constants are precomputed at construction time.
    pub fn rootgroup_action<R: Ring>(
        &self,
        ring: &R,
        alpha: usize,
        t: &R::Elem,
        v: &LieVector<R>,
    ) -> LieVector<R> {
        let pows = &self.u_powers[alpha];
        let mut out = LieVector::zero();
        let mut t_pow = ring.one();
        for (i, mat) in pows.iter().enumerate() {
            if i > 0 {
                t_pow = ring.mul(&t_pow, t);
            }
            for (&j, cv) in &v.coeffs {
                for &(k, m) in &mat[j] {
                    let c = ring.mul(&ring.mul(cv, &t_pow), &ring.from_i64(m));
                    out.add_term(ring, k, c);
                }
            }
        }
        out
    }

    /// Action of the torus element `prod_i alphacheck_i(t_i)`: scales
    /// `e_beta` by `prod_i t_i^{<beta, alphacheck_i>}` and fixes the `h_i`.
    pub fn torus_action<R: Ring>(
        &self,
        ring: &R,
        t: &[R::Elem],
        v: &LieVector<R>,
    ) -> Result<LieVector<R>, Error> {
        if t.len() != self.datum.rank() {
            return Err(Error::DimensionMismatch);
        }
        for ti in t {
            if ring.inv(ti).is_none() {
                return Err(Error::NonUnit);
            }
        }
        let nr = self.datum.num_roots();
        let mut out = LieVector::zero();
        for (&j, cv) in &v.coeffs {
            if j >= nr {
                out.add_term(ring, j, cv.clone());
                continue;
            }
            let mut scale = ring.one();
            for (i, ti) in t.iter().enumerate() {
                let e = self.datum.root_coroot_pairing(j, i);
                let p = ring.pow_i64(ti, e).ok_or(Error::NonUnit)?;
                scale = ring.mul(&scale, &p);
            }
            out.add_term(ring, j, ring.mul(cv, &scale));
        }
        Ok(out)
    }

    /// Largest `p >= 0` with `beta - p*alpha` a root.
    pub fn string_down(&self, alpha: usize, beta: usize) -> i64 {
        string_down(&self.datum, alpha, beta)
    }

    /// Matrix of `u_alpha(t)` restricted to the span of `basis_idx`, which
    /// must be preserved by the action (e.g. a graded piece acted on by the
    /// degree-zero part). Row and column order follow `basis_idx`.
    pub fn rootgroup_matrix<R: Ring>(
        &self,
        ring: &R,
        alpha: usize,
        t: &R::Elem,
        basis_idx: &[usize],
    ) -> Vec<Vec<R::Elem>> {
        let pos: HashMap<usize, usize> = basis_idx
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, i))
            .collect();
        let dim = basis_idx.len();
        let mut m = vec![vec![ring.zero(); dim]; dim];
        for (j, &b) in basis_idx.iter().enumerate() {
            let image = self.rootgroup_action(ring, alpha, t, &LieVector::basis(b, ring));
            for (&k, c) in &image.coeffs {
                let row = *pos.get(&k).expect("action must preserve the span");
                m[row][j] = c.clone();
            }
        }
        m
    }
}

fn string_down(datum: &RootDatum, alpha: usize, beta: usize) -> i64 {
    let mut p = 0i64;
    let mut cur = datum.roots[beta].clone();
    loop {
        for (c, a) in cur.iter_mut().zip(&datum.roots[alpha]) {
            *c -= a;
        }
        if datum.root_index(&cur).is_some() {
            p += 1;
        } else {
            return p;
        }
    }
}

/// Construct the algebra: structure constants via the extraspecial-pair
/// method, divided-power tables for every root group, and an exhaustive
/// Jacobi check.
pub fn structure_constants(datum: &RootDatum) -> Result<ChevalleyAlgebra, Error> {
    let nr = datum.num_roots();

    // Total order on positive roots: height, then lex on coordinates.
    let mut pos_sorted = datum.positives.clone();
    pos_sorted.sort_by_key(|&k| (datum.height(k), datum.roots[k].clone()));
    let mut pos_rank: HashMap<usize, usize> = HashMap::new();
    for (r, &k) in pos_sorted.iter().enumerate() {
        pos_rank.insert(k, r);
    }

    // Special pairs grouped by sum, processed by increasing height of the sum.
    let mut builder = ConstantBuilder {
        datum,
        pos_rank: &pos_rank,
        table: HashMap::new(),
    };
    for &gamma in &pos_sorted {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &a in &pos_sorted {
            for &b in &pos_sorted {
                if pos_rank[&a] < pos_rank[&b] && datum.is_root_sum(a, b) == Some(gamma) {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        pairs.sort_by_key(|&(a, _)| pos_rank[&a]);
        let (xa, xb) = pairs[0]; // extraspecial
        let p = string_down(datum, xa, xb);
        builder
            .table
            .insert((xa, xb), Ratio::from_integer(p + 1));
        for &(a, b) in &pairs[1..] {
            let val = builder.special_from_identity(a, b, xa, xb)?;
            builder.table.insert((a, b), val);
        }
    }

    // Dense table over all root pairs.
    let mut n_table = vec![vec![0i64; nr]; nr];
    for a in 0..nr {
        for b in 0..nr {
            if datum.is_root_sum(a, b).is_some() {
                let v = builder.n_const(a, b)?;
                if !v.is_integer() {
                    return Err(Error::Internal(format!(
                        "non-integer structure constant {v} at ({a},{b})"
                    )));
                }
                let n = v.to_integer();
                let p = string_down(datum, a, b);
                if n.abs() != p + 1 {
                    return Err(Error::Internal(format!(
                        "|N| = {} but p+1 = {} at ({a},{b})",
                        n.abs(),
                        p + 1
                    )));
                }
                n_table[a][b] = n;
            }
        }
    }
    for a in 0..nr {
        for b in 0..nr {
            if n_table[a][b] != -n_table[b][a] {
                return Err(Error::Internal("N antisymmetry violated".into()));
            }
        }
    }

    let mut algebra = ChevalleyAlgebra {
        datum: datum.clone(),
        n_table,
        u_powers: Vec::new(),
    };
    verify_jacobi(&algebra)?;
    algebra.u_powers = build_u_powers(&algebra)?;
    Ok(algebra)
}

struct ConstantBuilder<'a> {
    datum: &'a RootDatum,
    pos_rank: &'a HashMap<usize, usize>,
    table: HashMap<(usize, usize), Ratio<i64>>,
}

impl ConstantBuilder<'_> {
    fn is_positive(&self, a: usize) -> bool {
        self.pos_rank.contains_key(&a)
    }

    fn n_const(&self, a: usize, b: usize) -> Result<Rat, Error> {
        if self.datum.is_root_sum(a, b).is_none() {
            return Ok(Rat::zero());
        }
        match (self.is_positive(a), self.is_positive(b)) {
            (true, true) => {
                if self.pos_rank[&a] < self.pos_rank[&b] {
                    self.table.get(&(a, b)).copied().ok_or_else(|| {
                        Error::Internal(format!("missing special constant ({a},{b})"))
                    })
                } else {
                    Ok(-self.n_const(b, a)?)
                }
            }
            (false, false) => Ok(-self.n_const(self.datum.negative_of(a), self.datum.negative_of(b))?),
            _ => {
                // a + b + c = 0 with c = -(a+b); rotate to a same-signed pair
                // using N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b).
                let sum: Vec<i64> = self.datum.roots[a]
                    .iter()
                    .zip(&self.datum.roots[b])
                    .map(|(x, y)| -(x + y))
                    .collect();
                let c = self
                    .datum
                    .root_index(&sum)
                    .expect("sum of roots is a root here");
                let cc = self.datum.inner(c, c);
                if self.is_positive(b) == self.is_positive(c) {
                    let aa = self.datum.inner(a, a);
                    Ok(self.n_const(b, c)? * cc / aa)
                } else {
                    let bb = self.datum.inner(b, b);
                    Ok(self.n_const(c, a)? * cc / bb)
                }
            }
        }
    }

    /// Four-root relation for `a + b - xa - xb = 0` solved for `N_{a,b}`,
    /// given the already-fixed extraspecial constant `N_{xa,xb}`.
    fn special_from_identity(
        &self,
        a: usize,
        b: usize,
        xa: usize,
        xb: usize,
    ) -> Result<Rat, Error> {
        let d = self.datum;
        let gamma = d.is_root_sum(a, b).expect("special pair");
        let gg = d.inner(gamma, gamma);
        let neg_xa = d.negative_of(xa);
        let neg_xb = d.negative_of(xb);
        let mut rhs = Rat::zero();
        // term (b, -xa) x (a, -xb)
        if let Some(s) = d.is_root_sum(b, neg_xa) {
            let t = self.n_const(b, neg_xa)? * self.n_const(a, neg_xb)? / d.inner(s, s);
            rhs += t;
        }
        // term (-xa, a) x (b, -xb)
        if let Some(s) = d.is_root_sum(neg_xa, a) {
            let t = self.n_const(neg_xa, a)? * self.n_const(b, neg_xb)? / d.inner(s, s);
            rhs += t;
        }
        let n_x = self.table[&(xa, xb)];
        Ok(gg * rhs / n_x)
    }
}

fn verify_jacobi(algebra: &ChevalleyAlgebra) -> Result<(), Error> {
    let dim = algebra.dim();
    // [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0 on all basis triples, over i64
    let bracket_with = |i: usize, v: &[(usize, i64)]| -> HashMap<usize, i64> {
        let mut out: HashMap<usize, i64> = HashMap::new();
        for &(j, c) in v {
            for (k, n) in algebra.bracket_basis(i, j) {
                *out.entry(k).or_insert(0) += c * n;
            }
        }
        out
    };
    for x in 0..dim {
        for y in x..dim {
            for z in y..dim {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                    let inner = algebra.bracket_basis(b, c);
                    for (k, v) in bracket_with(a, &inner) {
                        *acc.entry(k).or_insert(0) += v;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(Error::Internal(format!(
                        "Jacobi identity fails on basis triple ({x},{y},{z})"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn build_u_powers(
    algebra: &ChevalleyAlgebra,
) -> Result<Vec<Vec<Vec<Vec<(usize, i64)>>>>, Error> {
    let dim = algebra.dim();
    let nr = algebra.num_roots();
    let mut all = Vec::with_capacity(nr);
    for a in 0..nr {
        // columns[j] for power 0: identity
        let mut powers: Vec<Vec<Vec<(usize, i64)>>> =
            vec![(0..dim).map(|j| vec![(j, 1i64)]).collect()];
        loop {
            let i = powers.len() as i64;
            let prev = powers.last().unwrap();
            let mut next: Vec<Vec<(usize, i64)>> = Vec::with_capacity(dim);
            let mut all_zero = true;
            for col in prev {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(j, c) in col {
                    for (k, n) in algebra.bracket_basis(a, j) {
                        *acc.entry(k).or_insert(0) += c * n;
                    }
                }
                let mut divided: Vec<(usize, i64)> = Vec::new();
                for (k, v) in acc {
                    if v == 0 {
                        continue;
                    }
                    if v % i != 0 {
                        return Err(Error::IntegralityViolation(format!(
                            "(ad e_{a})^{i}/{i}! has non-integral entry {v}/{i}"
                        )));
                    }
                    divided.push((k, v / i));
                }
                divided.sort_unstable();
                if !divided.is_empty() {
                    all_zero = false;
                }
                next.push(divided);
            }
            if all_zero {
                break;
            }
            powers.push(next);
            if powers.len() > 8 {
                return Err(Error::Internal("ad e_alpha is not nilpotent".into()));
            }
        }
        all.push(powers);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntRing, RatRing};
    use crate::rootdata::{build_root_system, RootSystemType};
    use num_bigint::BigInt;

    fn algebra(ty: &str) -> ChevalleyAlgebra {
        let d = build_root_system(ty.parse::<RootSystemType>().unwrap());
        structure_constants(&d).unwrap()
    }

    #[test]
    fn a1_is_sl2() {
        let alg = algebra("A1");
        let d = &alg.datum;
        let e = d.root_index(&[1]).unwrap();
        let f = d.root_index(&[-1]).unwrap();
        // [e, f] = h_1
        assert_eq!(alg.bracket_basis(e, f), vec![(alg.h_index(0), 1)]);
        // [h_1, e] = 2e
        assert_eq!(alg.bracket_basis(alg.h_index(0), e), vec![(e, 2)]);
        assert_eq!(alg.bracket_basis(alg.h_index(0), f), vec![(f, -2)]);
    }

    #[test]
    fn a2_constants_are_units() {
        let alg = algebra("A2");
        for a in 0..alg.num_roots() {
            for b in 0..alg.num_roots() {
                if alg.datum.is_root_sum(a, b).is_some() {
                    assert_eq!(alg.n_constant(a, b).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn g2_constants_have_max_modulus_three() {
        let alg = algebra("G2");
        let mut populated = 0;
        let mut max_abs = 0;
        for a in 0..alg.num_roots() {
            for b in 0..alg.num_roots() {
                if alg.datum.is_root_sum(a, b).is_some() {
                    populated += 1;
                    max_abs = max_abs.max(alg.n_constant(a, b).abs());
                    assert_ne!(alg.n_constant(a, b), 0);
                }
            }
        }
        assert!(populated > 0);
        assert_eq!(max_abs, 3);
    }

    #[test]
    fn jacobi_holds_for_test_matrix() {
        // construction fails if Jacobi fails; this pins the covered types
        for ty in ["A1", "A2", "B2", "G2"] {
            algebra(ty);
        }
    }

    #[test]
    fn g2_simple_bracket_lands_on_sum() {
        let alg = algebra("G2");
        let d = &alg.datum;
        let a1 = d.root_index(&[1, 0]).unwrap();
        let a2 = d.root_index(&[0, 1]).unwrap();
        let sum = d.root_index(&[1, 1]).unwrap();
        let br = alg.bracket_basis(a1, a2);
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].0, sum);
        assert_eq!(br[0].1.abs(), 1);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear() {
        let alg = algebra("G2");
        let ring = IntRing;
        let u = {
            let mut v = LieVector::basis(0, &ring);
            v.add_term(&ring, 3, BigInt::from(2));
            v.add_term(&ring, alg.h_index(1), BigInt::from(-1));
            v
        };
        let w = {
            let mut v = LieVector::basis(5, &ring);
            v.add_term(&ring, 7, BigInt::from(3));
            v
        };
        // [v, v] = 0
        assert!(alg.bracket(&ring, &u, &u).is_zero());
        let uv = alg.bracket(&ring, &u, &w);
        let vu = alg.bracket(&ring, &w, &u);
        assert_eq!(uv, vu.scale(&ring, &BigInt::from(-1)));
    }

    #[test]
    fn sl2_rootgroup_action_on_opposite_root() {
        let alg = algebra("A1");
        let d = &alg.datum;
        let e = d.root_index(&[1]).unwrap();
        let f = d.root_index(&[-1]).unwrap();
        let ring = IntRing;
        let t = BigInt::from(5);
        let out = alg.rootgroup_action(&ring, e, &t, &LieVector::basis(f, &ring));
        // u_alpha(t) e_{-alpha} = e_{-alpha} + t h - t^2 e_alpha
        let mut expect = LieVector::basis(f, &ring);
        expect.add_term(&ring, alg.h_index(0), BigInt::from(5));
        expect.add_term(&ring, e, BigInt::from(-25));
        assert_eq!(out, expect);
    }

    #[test]
    fn rootgroup_action_fixes_own_root_and_zero_is_identity() {
        let alg = algebra("G2");
        let ring = IntRing;
        for a in 0..alg.num_roots() {
            let ea = LieVector::basis(a, &ring);
            assert_eq!(alg.rootgroup_action(&ring, a, &BigInt::from(9), &ea), ea);
        }
        let mut v = LieVector::basis(2, &ring);
        v.add_term(&ring, alg.h_index(0), BigInt::from(4));
        assert_eq!(alg.rootgroup_action(&ring, 0, &BigInt::from(0), &v), v);
    }

    #[test]
    fn rootgroup_action_is_homomorphism_in_t() {
        let alg = algebra("B2");
        let ring = IntRing;
        let s = BigInt::from(3);
        let t = BigInt::from(-2);
        let st = BigInt::from(1);
        for a in 0..alg.num_roots() {
            for j in 0..alg.dim() {
                let v = LieVector::basis(j, &ring);
                let one = alg.rootgroup_action(&ring, a, &st, &v);
                let two = alg.rootgroup_action(&ring, a, &s, &alg.rootgroup_action(&ring, a, &t, &v));
                assert_eq!(one, two);
            }
        }
    }

    #[test]
    fn rootgroup_action_is_bracket_automorphism() {
        let alg = algebra("G2");
        let ring = IntRing;
        let t = BigInt::from(2);
        for a in [0usize, 3, 7] {
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    let u = LieVector::basis(i, &ring);
                    let v = LieVector::basis(j, &ring);
                    let lhs =
                        alg.rootgroup_action(&ring, a, &t, &alg.bracket(&ring, &u, &v));
                    let rhs = alg.bracket(
                        &ring,
                        &alg.rootgroup_action(&ring, a, &t, &u),
                        &alg.rootgroup_action(&ring, a, &t, &v),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn torus_action_examples() {
        let alg = algebra("A1");
        let ring = RatRing;
        let e = alg.datum.root_index(&[1]).unwrap();
        let v = LieVector::basis(e, &ring);
        // all t_i = 1 is the identity
        let out = alg.torus_action(&ring, &[ring.one()], &v).unwrap();
        assert_eq!(out, v);
        // t = 2: e_alpha scales by t^2 = 4
        let out = alg
            .torus_action(&ring, &[ring.from_i64(2)], &v)
            .unwrap();
        assert_eq!(out, v.scale(&ring, &ring.from_i64(4)));
        // h is fixed
        let h = LieVector::basis(alg.h_index(0), &ring);
        let out = alg.torus_action(&ring, &[ring.from_i64(7)], &h).unwrap();
        assert_eq!(out, h);
        // non-unit rejected over Z
        let zr = IntRing;
        let hz = LieVector::<IntRing>::basis(alg.h_index(0), &zr);
        assert!(matches!(
            alg.torus_action(&zr, &[BigInt::from(2)], &hz),
            Err(Error::NonUnit)
        ));
    }
}
