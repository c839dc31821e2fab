//! First filtration-quotient data for a rational apartment point and the
//! induced Z/m-grading of the Chevalley algebra.
//!
//! For a rational point `x` of order `m` the module computes the sub-root
//! system `Phi_x = { alpha | alpha(x) in Z }`, the decomposition of the
//! reductive quotient into simple factors plus a central torus, the affine
//! basis of the first graded piece (`psi(x) = r(x)`), and the Z/m-grading
//! `e_alpha -> (-m alpha(x)) mod m`.

use num_traits::Zero;
use serde::Serialize;

use crate::chevalley::ChevalleyAlgebra;
use crate::rootdata::{AffineRoot, ApartmentPoint, Rat, RootDatum};

/// Simple-factor decomposition of the reductive quotient's root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientType {
    /// Type labels of the simple factors, e.g. `["A1", "A1"]`.
    pub factors: Vec<String>,
    /// Rank of the central torus.
    pub torus_rank: usize,
}

impl QuotientType {
    pub fn label(&self) -> String {
        let mut parts = self.factors.clone();
        if self.torus_rank > 0 {
            parts.push(format!("T{}", self.torus_rank));
        }
        if parts.is_empty() {
            "T0".to_string()
        } else {
            parts.join("x")
        }
    }
}

/// The combinatorial shadow of the first Moy-Prasad quotient at `x`.
#[derive(Clone, Debug)]
pub struct MPQuotientData {
    pub x: ApartmentPoint,
    pub m: u64,
    pub r: Rat,
    /// Root indices with `alpha(x)` integral, sorted.
    pub phi_x: Vec<usize>,
    pub quotient_type: QuotientType,
    /// Affine roots with `psi(x) = r(x)`, one per qualifying gradient.
    pub v_basis: Vec<AffineRoot>,
    pub hyperspecial: bool,
}

impl MPQuotientData {
    /// Dimension of the reductive quotient group: `|Phi_x| + rank`.
    pub fn quotient_dim(&self, datum: &RootDatum) -> usize {
        self.phi_x.len() + datum.rank()
    }

    /// Dimension of the representation space.
    pub fn space_dim(&self, datum: &RootDatum) -> usize {
        if self.hyperspecial {
            self.v_basis.len() + datum.rank()
        } else {
            self.v_basis.len()
        }
    }

    pub fn json_report(&self, datum: &RootDatum) -> serde_json::Value {
        serde_json::json!({
            "order": self.m,
            "r_of_x": self.r.to_string(),
            "hyperspecial": self.hyperspecial,
            "quotient_type": self.quotient_type.label(),
            "quotient_dim": self.quotient_dim(datum),
            "phi_x": self.phi_x.iter().map(|&k| datum.roots[k].clone()).collect::<Vec<_>>(),
            "v_basis": self.v_basis.iter()
                .map(|a| serde_json::json!({"root": datum.roots[a.gradient], "level": a.level}))
                .collect::<Vec<_>>(),
            "dual_weights": dual_weight_multiset(datum, self),
        })
    }
}

/// Compute `Phi_x`, the quotient type, and the `V_x` basis.
pub fn compute_mp_quotient(datum: &RootDatum, x: &ApartmentPoint) -> MPQuotientData {
    let r = x.r_of_x();
    let hyperspecial = r == Rat::new(1, 1);
    let mut phi_x = Vec::new();
    let mut v_basis = Vec::new();
    for k in 0..datum.num_roots() {
        let val = datum.root_value(k, x);
        if val.is_integer() {
            phi_x.push(k);
        }
        let level = r - val;
        if level.is_integer() {
            v_basis.push(AffineRoot {
                gradient: k,
                level: level.to_integer(),
            });
        }
    }
    let quotient_type = classify_subsystem(datum, &phi_x);
    MPQuotientData {
        x: x.clone(),
        m: x.order(),
        r,
        phi_x,
        quotient_type,
        v_basis,
        hyperspecial,
    }
}

/// Type decomposition of a closed symmetric subsystem given by root indices.
pub fn classify_subsystem(datum: &RootDatum, subsystem: &[usize]) -> QuotientType {
    let sub: std::collections::HashSet<usize> = subsystem.iter().copied().collect();
    let positives: Vec<usize> = subsystem
        .iter()
        .copied()
        .filter(|&k| datum.roots[k].iter().all(|&c| c >= 0) && datum.roots[k].iter().any(|&c| c > 0))
        .collect();
    // simple roots of the subsystem: positives not a sum of two positives
    let simples: Vec<usize> = positives
        .iter()
        .copied()
        .filter(|&g| {
            !positives.iter().any(|&a| {
                positives
                    .iter()
                    .any(|&b| datum.is_root_sum(a, b) == Some(g))
            })
        })
        .collect();

    // connected components of the simple-root graph
    let n = simples.len();
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = n_comp;
        while let Some(t) = stack.pop() {
            for u in 0..n {
                if comp[u] == usize::MAX
                    && !datum.inner(simples[t], simples[u]).is_zero()
                {
                    comp[u] = n_comp;
                    stack.push(u);
                }
            }
        }
        n_comp += 1;
    }

    let mut factors = Vec::new();
    for c in 0..n_comp {
        let members: Vec<usize> = (0..n).filter(|&s| comp[s] == c).map(|s| simples[s]).collect();
        // count subsystem roots supported on this component's simples
        let span: std::collections::HashSet<usize> = {
            let mut set: std::collections::HashSet<usize> = members.iter().copied().collect();
            loop {
                let mut grew = false;
                let cur: Vec<usize> = set.iter().copied().collect();
                for &a in &cur {
                    for &b in &cur {
                        if let Some(s) = datum.is_root_sum(a, b) {
                            if sub.contains(&s) && set.insert(s) {
                                grew = true;
                            }
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            set
        };
        let roots_in_comp = 2 * span.len(); // positives generated, plus negatives
        factors.push(classify_component(datum, &members, roots_in_comp));
    }
    factors.sort();

    // torus rank = rank - rank of the span of the subsystem
    let torus_rank = datum.rank() - lattice_rank(datum, subsystem);
    QuotientType {
        factors,
        torus_rank,
    }
}

fn classify_component(datum: &RootDatum, simples: &[usize], num_roots: usize) -> String {
    let k = simples.len();
    let lengths: Vec<Rat> = simples.iter().map(|&s| datum.inner(s, s)).collect();
    let min_len = lengths.iter().cloned().fold(None::<Rat>, |acc, l| {
        Some(match acc {
            Some(a) if a <= l => a,
            _ => l,
        })
    });
    let short = lengths
        .iter()
        .filter(|&&l| Some(l) == min_len)
        .count();
    let laced = short == k;
    let label = |f: char| format!("{f}{k}");
    if laced {
        // simply-laced within the component
        if num_roots == k * (k + 1) {
            label('A')
        } else if num_roots == 2 * k * (k - 1) {
            label('D')
        } else {
            label('E')
        }
    } else if k == 2 && num_roots == 12 {
        label('G')
    } else if k == 4 && num_roots == 48 {
        label('F')
    } else if short == 1 {
        label('B')
    } else {
        label('C')
    }
}

fn lattice_rank(datum: &RootDatum, subsystem: &[usize]) -> usize {
    // rank over Q of the root coordinates, by fraction-free elimination
    let mut rows: Vec<Vec<Rat>> = subsystem
        .iter()
        .map(|&k| datum.roots[k].iter().map(|&c| Rat::from_integer(c)).collect())
        .collect();
    let cols = datum.rank();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pv = rows[rank][c];
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c] / pv;
                for j in 0..cols {
                    let s = rows[rank][j] * f;
                    rows[r][j] -= s;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Z/m-grading of the Chevalley basis: `pieces[i]` lists the basis indices
/// of degree `i`.
#[derive(Clone, Debug)]
pub struct VinbergGrading {
    pub m: u64,
    pub pieces: Vec<Vec<usize>>,
    /// degree of every basis index
    pub degree: Vec<usize>,
}

impl VinbergGrading {
    pub fn piece_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.len()).collect()
    }
}

/// Grade the algebra by `e_alpha -> (-m alpha(x)) mod m`, `h_i -> 0`.
pub fn vinberg_grading(
    datum: &RootDatum,
    algebra: &ChevalleyAlgebra,
    x: &ApartmentPoint,
) -> VinbergGrading {
    let m = x.order();
    let mut degree = vec![0usize; algebra.dim()];
    let mut pieces = vec![Vec::new(); m as usize];
    for k in 0..datum.num_roots() {
        let val = datum.root_value(k, x) * Rat::from_integer(m as i64);
        debug_assert!(val.is_integer());
        let d = (-val.to_integer()).rem_euclid(m as i64) as usize;
        degree[k] = d;
        pieces[d].push(k);
    }
    for i in 0..datum.rank() {
        let idx = algebra.h_index(i);
        degree[idx] = 0;
        pieces[0].push(idx);
    }
    VinbergGrading { m, pieces, degree }
}

/// Result of the exhaustive `[g_i, g_j] subset g_{i+j}` check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingCertificate {
    Pass,
    /// First violating basis pair.
    Violation(usize, usize),
}

pub fn check_grading_bracket(
    algebra: &ChevalleyAlgebra,
    grading: &VinbergGrading,
) -> GradingCertificate {
    let m = grading.m as usize;
    for i in 0..algebra.dim() {
        for j in 0..algebra.dim() {
            let want = (grading.degree[i] + grading.degree[j]) % m;
            for (k, c) in algebra.bracket_basis(i, j) {
                if c != 0 && grading.degree[k] != want {
                    return GradingCertificate::Violation(i, j);
                }
            }
        }
    }
    GradingCertificate::Pass
}

/// Multiset of torus weights of the dual representation: `-alpha` for each
/// basis affine root, in pairing-ready coordinates (`w_j = <-alpha,
/// alphacheck_j>`), plus `rank` zero vectors in the hyperspecial case.
pub fn dual_weight_multiset(datum: &RootDatum, quotient: &MPQuotientData) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = quotient
        .v_basis
        .iter()
        .map(|a| {
            (0..datum.rank())
                .map(|j| -datum.root_coroot_pairing(a.gradient, j))
                .collect()
        })
        .collect();
    if quotient.hyperspecial {
        for _ in 0..datum.rank() {
            out.push(vec![0; datum.rank()]);
        }
    }
    out.sort();
    out
}
