//! Element encodings and their multiplication rules.
//!
//! Every element of a [`GroupTable`](super::GroupTable) is stored as a fixed
//! width slice of `u16` words. The carrier knows how to multiply two such
//! slices and how to bring a product into canonical form.

use std::sync::Arc;

use crate::field::FieldTables;

/// Widest encoding any carrier produces.
pub const MAX_WIDTH: usize = 24;

pub type Word = u16;

#[derive(Clone, Debug)]
pub enum Carrier {
    /// `dim × dim` matrices over a small field, row-major. With `projective`
    /// set, the first nonzero entry is scaled to 1.
    Matrix {
        dim: usize,
        field: Arc<FieldTables>,
        projective: bool,
    },
    /// Pairs `(v, z)` with `v ∈ Z_p^{2n}`, `z ∈ Z_p`, encoded as `v ‖ z`.
    Extraspecial { p: u16, n: usize, minus: bool },
    /// Image tuples on `degree` points; the product `ab` applies `a` first.
    Permutation { degree: usize },
    /// `(r, s)` standing for `ρ^r σ^s` in the dihedral group of order `2k`.
    Dihedral { k: u16 },
}

impl Carrier {
    pub fn width(&self) -> usize {
        match self {
            Carrier::Matrix { dim, .. } => dim * dim,
            Carrier::Extraspecial { n, .. } => 2 * n + 1,
            Carrier::Permutation { degree } => *degree,
            Carrier::Dihedral { .. } => 2,
        }
    }

    pub fn identity(&self) -> Vec<Word> {
        match self {
            Carrier::Matrix { dim, .. } => {
                let mut m = vec![0; dim * dim];
                for i in 0..*dim {
                    m[i * dim + i] = 1;
                }
                m
            }
            Carrier::Extraspecial { n, .. } => vec![0; 2 * n + 1],
            Carrier::Permutation { degree } => (0..*degree as Word).collect(),
            Carrier::Dihedral { .. } => vec![0, 0],
        }
    }

    /// Writes the canonical form of `a · b` into `out`.
    #[inline]
    pub fn mul_into(&self, a: &[Word], b: &[Word], out: &mut [Word]) {
        match self {
            Carrier::Matrix {
                dim,
                field,
                projective,
            } => {
                let d = *dim;
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0;
                        for k in 0..d {
                            acc = field.add(acc, field.mul(a[i * d + k], b[k * d + j]));
                        }
                        out[i * d + j] = acc;
                    }
                }
                if *projective {
                    normalize_projective(field, &mut out[..d * d]);
                }
            }
            Carrier::Extraspecial { p, n, minus } => {
                let p = *p as u32;
                let two_n = 2 * n;
                for i in 0..two_n {
                    out[i] = ((a[i] as u32 + b[i] as u32) % p) as Word;
                }
                let cross = extraspecial_cocycle(p, *n, *minus, &a[..two_n], &b[..two_n]);
                out[two_n] = ((a[two_n] as u32 + b[two_n] as u32 + cross) % p) as Word;
            }
            Carrier::Permutation { degree } => {
                for i in 0..*degree {
                    out[i] = b[a[i] as usize];
                }
            }
            Carrier::Dihedral { k } => {
                let k = *k as u32;
                let r2 = if a[1] == 1 {
                    (k - b[0] as u32) % k
                } else {
                    b[0] as u32
                };
                out[0] = ((a[0] as u32 + r2) % k) as Word;
                out[1] = a[1] ^ b[1];
            }
        }
    }

    /// `a · b == b · a`, without materializing products where avoidable.
    #[inline]
    pub fn commutes(&self, a: &[Word], b: &[Word]) -> bool {
        match self {
            Carrier::Matrix {
                dim,
                field,
                projective: false,
            } => {
                let d = *dim;
                for i in 0..d {
                    for j in 0..d {
                        let mut ab = 0;
                        let mut ba = 0;
                        for k in 0..d {
                            ab = field.add(ab, field.mul(a[i * d + k], b[k * d + j]));
                            ba = field.add(ba, field.mul(b[i * d + k], a[k * d + j]));
                        }
                        if ab != ba {
                            return false;
                        }
                    }
                }
                true
            }
            Carrier::Matrix {
                dim,
                field,
                projective: true,
            } => {
                // ab = λ·ba for a nonzero scalar λ
                let d = *dim;
                let mut ratio: Option<(Word, Word)> = None;
                for i in 0..d {
                    for j in 0..d {
                        let mut ab = 0;
                        let mut ba = 0;
                        for k in 0..d {
                            ab = field.add(ab, field.mul(a[i * d + k], b[k * d + j]));
                            ba = field.add(ba, field.mul(b[i * d + k], a[k * d + j]));
                        }
                        match ratio {
                            None => {
                                if (ab == 0) != (ba == 0) {
                                    return false;
                                }
                                if ab != 0 {
                                    ratio = Some((ab, ba));
                                }
                            }
                            // ab/ba == r0/r1  <=>  ab·r1 == ba·r0
                            Some((r0, r1)) => {
                                if field.mul(ab, r1) != field.mul(ba, r0) {
                                    return false;
                                }
                            }
                        }
                    }
                }
                true
            }
            Carrier::Extraspecial { p, n, minus } => {
                let two_n = 2 * n;
                let p = *p as u32;
                extraspecial_cocycle(p, *n, *minus, &a[..two_n], &b[..two_n])
                    == extraspecial_cocycle(p, *n, *minus, &b[..two_n], &a[..two_n])
            }
            _ => {
                let w = self.width();
                let mut ab = [0; MAX_WIDTH];
                let mut ba = [0; MAX_WIDTH];
                self.mul_into(a, b, &mut ab[..w]);
                self.mul_into(b, a, &mut ba[..w]);
                ab[..w] == ba[..w]
            }
        }
    }

    /// Brings an arbitrary encoding into canonical form.
    pub fn canonicalize(&self, a: &mut [Word]) {
        if let Carrier::Matrix {
            field,
            projective: true,
            ..
        } = self
        {
            normalize_projective(field, a);
        }
    }
}

#[inline]
fn normalize_projective(field: &FieldTables, m: &mut [Word]) {
    if let Some(&lead) = m.iter().find(|&&x| x != 0) {
        if lead != 1 {
            let s = field.inv(lead);
            for x in m.iter_mut() {
                *x = field.mul(*x, s);
            }
        }
    }
}

/// The 2-cocycle `β(u, v)` in `(u, z)(v, w) = (u + v, z + w + β(u, v))`.
///
/// The plus form is `Σ u_{2i} v_{2i+1}`. For `p = 2` the minus form adds
/// `u_0 v_0 + u_1 v_1`, turning the first hyperbolic pair anisotropic; for odd
/// `p` it adds the carry of `u_0 + v_0`, giving the exponent-p² group.
#[inline]
fn extraspecial_cocycle(p: u32, n: usize, minus: bool, u: &[Word], v: &[Word]) -> u32 {
    let mut s = 0u32;
    for i in 0..n {
        s += u[2 * i] as u32 * v[2 * i + 1] as u32;
    }
    if minus {
        if p == 2 {
            s += u[0] as u32 * v[0] as u32 + u[1] as u32 * v[1] as u32;
        } else if u[0] as u32 + v[0] as u32 >= p {
            s += 1;
        }
    }
    s % p
}
