//! Small finite fields with precomputed arithmetic tables.
//!
//! Supported: p prime, p <= 13, extension degree e <= 3. Extension fields
//! are built from a fixed table of irreducible moduli so that element
//! encodings, and therefore every emitted report, are bit-reproducible.
//! An element is encoded as `c0 + c1 p + c2 p^2` where the c_i are the
//! coefficients of its polynomial representative.

use crate::error::Error;
use crate::ring::Ring;

const PRIMES: [u16; 6] = [2, 3, 5, 7, 11, 13];

/// Fixed monic irreducible moduli, listed as coefficient vectors
/// `[c0, c1, ..., 1]` of `c0 + c1 t + ... + t^e`.
fn modulus_for(p: u16, e: u32) -> Option<Vec<u16>> {
    let m: &[u16] = match (p, e) {
        (2, 2) => &[1, 1, 1],       // t^2 + t + 1
        (2, 3) => &[1, 1, 0, 1],    // t^3 + t + 1
        (3, 2) => &[1, 0, 1],       // t^2 + 1
        (3, 3) => &[1, 2, 0, 1],    // t^3 + 2t + 1
        (5, 2) => &[2, 0, 1],       // t^2 + 2
        (5, 3) => &[4, 1, 0, 1],    // t^3 + t + 4
        (7, 2) => &[1, 0, 1],       // t^2 + 1
        (7, 3) => &[2, 0, 0, 1],    // t^3 + 2
        (11, 2) => &[1, 0, 1],      // t^2 + 1
        (11, 3) => &[4, 1, 0, 1],   // t^3 + t + 4
        (13, 2) => &[2, 0, 1],      // t^2 + 2
        (13, 3) => &[2, 0, 0, 1],   // t^3 + 2
        _ => return None,
    };
    Some(m.to_vec())
}

/// A finite field `F_{p^e}` with full multiplication and inversion tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    pub p: u16,
    pub e: u32,
    q: usize,
    modulus: Vec<u16>,
    mul_table: Vec<u16>,
    inv_table: Vec<u16>,
    neg_table: Vec<u16>,
}

impl Fq {
    pub fn new(p: u16, e: u32) -> Result<Fq, Error> {
        if !PRIMES.contains(&p) || e == 0 || e > 3 {
            return Err(Error::UnsupportedField { p: p as u32, e });
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            modulus_for(p, e).ok_or(Error::UnsupportedField { p: p as u32, e })?
        };
        let q = (p as usize).pow(e);
        let mut f = Fq {
            p,
            e,
            q,
            modulus,
            mul_table: vec![0; q * q],
            inv_table: vec![0; q],
            neg_table: vec![0; q],
        };
        f.build_tables();
        f.check_consistency();
        Ok(f)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }

    fn decode(&self, x: u16) -> Vec<u16> {
        let mut c = vec![0u16; self.e as usize];
        let mut v = x;
        for d in c.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        c
    }

    pub fn encode(&self, coeffs: &[u16]) -> u16 {
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.p as u32 + (c % self.p) as u32;
        }
        v as u16
    }

    fn build_tables(&mut self) {
        let e = self.e as usize;
        let p = self.p as u32;
        for x in 0..self.q as u16 {
            let cx = self.decode(x);
            let nc: Vec<u16> = cx.iter().map(|&c| ((p as u16) - c) % self.p).collect();
            self.neg_table[x as usize] = self.encode(&nc);
            for y in 0..self.q as u16 {
                let cy = self.decode(y);
                // multiply the polynomial representatives
                let mut prod = vec![0u32; 2 * e - 1];
                for i in 0..e {
                    for j in 0..e {
                        prod[i + j] += cx[i] as u32 * cy[j] as u32;
                    }
                }
                // reduce modulo the monic modulus
                for d in (e..2 * e - 1).rev() {
                    let lead = prod[d] % p;
                    prod[d] = 0;
                    for (k, &mc) in self.modulus.iter().enumerate().take(e) {
                        let sub = lead * mc as u32 % p;
                        prod[d - e + k] = (prod[d - e + k] + p - sub) % p;
                    }
                }
                let coeffs: Vec<u16> = prod[..e].iter().map(|&c| (c % p) as u16).collect();
                self.mul_table[x as usize * self.q + y as usize] = self.encode(&coeffs);
            }
        }
        for x in 1..self.q as u16 {
            let y = (1..self.q as u16)
                .find(|&y| self.mul_table[x as usize * self.q + y as usize] == 1)
                .expect("modulus reducible: zero divisor has no inverse");
            self.inv_table[x as usize] = y;
        }
    }

    fn check_consistency(&self) {
        // every nonzero element has multiplicative order dividing q - 1
        let r = self;
        for x in 1..self.q as u16 {
            assert_eq!(r.pow_i64(&x, self.q as i64 - 1), Some(1));
            assert_eq!(r.mul(&x, &r.inv_table[x as usize]), 1);
        }
    }

    fn add_elems(&self, a: u16, b: u16) -> u16 {
        let ca = self.decode(a);
        let cb = self.decode(b);
        let sum: Vec<u16> = ca
            .iter()
            .zip(cb.iter())
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.encode(&sum)
    }

    /// Embedding table `F_{p^a} -> F_{p^b}` for `a | b`: image of every
    /// element of `base`, indexed by encoding. The generator of `base` maps
    /// to the smallest root of its modulus, so the embedding is canonical.
    pub fn embedding_from(&self, base: &Fq) -> Result<Vec<u16>, Error> {
        if base.p != self.p || self.e % base.e != 0 {
            return Err(Error::RingMismatch);
        }
        if base.e == self.e {
            return Ok((0..base.q as u16).collect());
        }
        // smallest root of the base modulus in self
        let root = self
            .elements()
            .find(|&z| {
                let mut acc = 0u16;
                for &mc in base.modulus.iter().rev() {
                    acc = self.add_elems(self.mul(&acc, &z), mc % self.p);
                }
                acc == 0
            })
            .ok_or(Error::RingMismatch)?;
        let table = (0..base.q as u16)
            .map(|x| {
                let coeffs = base.decode(x);
                let mut acc = 0u16;
                for &c in coeffs.iter().rev() {
                    acc = self.add_elems(self.mul(&acc, &root), c);
                }
                acc
            })
            .collect();
        Ok(table)
    }
}

impl Ring for Fq {
    type Elem = u16;

    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn add(&self, a: &u16, b: &u16) -> u16 {
        self.add_elems(*a, *b)
    }
    fn sub(&self, a: &u16, b: &u16) -> u16 {
        self.add_elems(*a, self.neg_table[*b as usize])
    }
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        self.mul_table[*a as usize * self.q + *b as usize]
    }
    fn neg(&self, a: &u16) -> u16 {
        self.neg_table[*a as usize]
    }
    fn from_i64(&self, n: i64) -> u16 {
        n.rem_euclid(self.p as i64) as u16
    }
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u16) -> Option<u16> {
        if *a == 0 {
            None
        } else {
            Some(self.inv_table[*a as usize])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        for p in PRIMES {
            let f = Fq::new(p, 1).unwrap();
            assert_eq!(f.q(), p as usize);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(&a, &b), (a * b) % p);
                    assert_eq!(f.add(&a, &b), (a + b) % p);
                }
            }
        }
    }

    #[test]
    fn all_supported_extensions_build() {
        for p in PRIMES {
            for e in 1..=3u32 {
                let f = Fq::new(p, e).unwrap();
                assert_eq!(f.q(), (p as usize).pow(e));
                // field axioms spot check: distributivity on a few triples
                for t in 0..f.q().min(20) as u16 {
                    let a = t;
                    let b = (t * 3 + 1) % f.q() as u16;
                    let c = (t * 7 + 2) % f.q() as u16;
                    assert_eq!(
                        f.mul(&a, &f.add(&b, &c)),
                        f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn unsupported_fields_rejected() {
        assert!(matches!(Fq::new(4, 1), Err(Error::UnsupportedField { .. })));
        assert!(matches!(Fq::new(17, 1), Err(Error::UnsupportedField { .. })));
        assert!(matches!(Fq::new(2, 4), Err(Error::UnsupportedField { .. })));
        assert!(matches!(Fq::new(2, 0), Err(Error::UnsupportedField { .. })));
    }

    #[test]
    fn f4_is_not_z4() {
        let f = Fq::new(2, 2).unwrap();
        // t * t = t + 1 under t^2 + t + 1
        let t = f.encode(&[0, 1]);
        assert_eq!(f.mul(&t, &t), f.encode(&[1, 1]));
        assert_eq!(f.add(&t, &t), 0);
        assert_eq!(f.inv(&t), Some(f.encode(&[1, 1])));
    }

    #[test]
    fn f9_square_of_i_is_minus_one() {
        let f = Fq::new(3, 2).unwrap();
        let i = f.encode(&[0, 1]);
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
    }

    #[test]
    fn embeddings_are_field_maps() {
        for (p, a, b) in [(2u16, 1u32, 2u32), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 3)] {
            let base = Fq::new(p, a).unwrap();
            let ext = Fq::new(p, b).unwrap();
            let emb = ext.embedding_from(&base).unwrap();
            assert_eq!(emb[0], 0);
            assert_eq!(emb[1], 1);
            for x in base.elements() {
                for y in base.elements() {
                    assert_eq!(emb[base.mul(&x, &y) as usize], ext.mul(&emb[x as usize], &emb[y as usize]));
                    assert_eq!(emb[base.add(&x, &y) as usize], ext.add(&emb[x as usize], &emb[y as usize]));
                }
            }
            // injectivity
            let mut seen: Vec<u16> = emb.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), base.q());
        }
    }

    #[test]
    fn degree_mismatch_rejected() {
        let f8 = Fq::new(2, 3).unwrap();
        let f4 = Fq::new(2, 2).unwrap();
        assert!(f8.embedding_from(&f4).is_err());
    }
}
