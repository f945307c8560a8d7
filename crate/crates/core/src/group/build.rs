//! Constructors for the group families.

use std::sync::Arc;

use super::{
    Carrier, ExtraspecialForm, GroupError, GroupFamily, GroupTable, LinearKind, NamedGroup, Word,
};
use crate::field::{prime_power, FieldSpec, FieldTables};

/// Carrier used for a family, rebuilt deterministically from its parameters.
pub(crate) fn carrier_for(family: &GroupFamily) -> Result<Carrier, GroupError> {
    Ok(match *family {
        GroupFamily::Linear { kind, n, q } => Carrier::Matrix {
            dim: n as usize,
            field: field_for(q)?,
            projective: kind.is_projective(),
        },
        GroupFamily::Suzuki { m } => Carrier::Matrix {
            dim: 4,
            field: field_for(1 << (2 * m + 1))?,
            projective: false,
        },
        GroupFamily::Extraspecial { p, n, form } => Carrier::Extraspecial {
            p: p as Word,
            n: n as usize,
            minus: form == ExtraspecialForm::Minus,
        },
        GroupFamily::Named { group } => match group {
            NamedGroup::Dihedral(k) => Carrier::Dihedral { k: k as Word },
            NamedGroup::Symmetric(k) | NamedGroup::Alternating(k) => {
                Carrier::Permutation { degree: k as usize }
            }
            NamedGroup::Quaternion8 => Carrier::Extraspecial {
                p: 2,
                n: 1,
                minus: true,
            },
        },
    })
}

/// Default cap on enumerated group orders.
pub const ENUMERATION_CAP: u64 = 1 << 20;

const EXTRASPECIAL_CAP: u64 = 1 << 18;
const NAMED_CAP: u64 = 10_000;
const SUZUKI_BIG_CAP: u64 = 1 << 25;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Classical order of GL/SL/PGL/PSL(n, q).
pub fn expected_linear_order(kind: LinearKind, n: u32, q: u64) -> u64 {
    let qn = q.pow(n);
    let gl: u64 = (0..n).map(|i| qn - q.pow(i)).product();
    match kind {
        LinearKind::Gl => gl,
        LinearKind::Sl | LinearKind::Pgl => gl / (q - 1),
        LinearKind::Psl => gl / (q - 1) / gcd(n as u64, q - 1),
    }
}

pub(crate) fn field_for(q: u32) -> Result<Arc<FieldTables>, GroupError> {
    let (p, e) = prime_power(q as u64)
        .ok_or_else(|| GroupError::InvalidParameters(format!("q = {q} is not a prime power")))?;
    let spec = FieldSpec::new(p, e)?;
    Ok(Arc::new(FieldTables::new(&spec)?))
}

/// GL/SL/PGL/PSL(n, q) for `n ∈ {2, 3}` by closure from transvections and a
/// diagonal generator.
pub fn build_linear(kind: LinearKind, n: u32, q: u32) -> Result<GroupTable, GroupError> {
    if !(2..=3).contains(&n) {
        return Err(GroupError::InvalidParameters(format!(
            "degree {n} unsupported; use 2 or 3"
        )));
    }
    if prime_power(q as u64).is_none() {
        return Err(GroupError::InvalidParameters(format!(
            "q = {q} is not a prime power"
        )));
    }
    let expected = expected_linear_order(kind, n, q as u64);
    if expected > ENUMERATION_CAP {
        return Err(GroupError::OrderCapExceeded {
            order: expected,
            cap: ENUMERATION_CAP,
        });
    }
    let field = field_for(q)?;
    let d = n as usize;
    let p = field.spec().p();
    let basis: Vec<Word> = (0..field.spec().n()).map(|t| p.pow(t) as Word).collect();
    let identity = |m: &mut Vec<Word>| {
        for i in 0..d {
            m[i * d + i] = 1;
        }
    };
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            for &b in &basis {
                let mut m = vec![0; d * d];
                identity(&mut m);
                m[i * d + j] = b;
                gens.push(m);
            }
        }
    }
    let alpha = field.primitive_element();
    if q > 2 {
        let mut m = vec![0; d * d];
        identity(&mut m);
        m[0] = alpha;
        m[d + 1] = field.inv(alpha);
        gens.push(m);
        if matches!(kind, LinearKind::Gl | LinearKind::Pgl) {
            let mut m = vec![0; d * d];
            identity(&mut m);
            m[0] = alpha;
            gens.push(m);
        }
    }
    let carrier = Carrier::Matrix {
        dim: d,
        field,
        projective: kind.is_projective(),
    };
    GroupTable::from_generators(GroupFamily::Linear { kind, n, q }, carrier, &gens, expected)
}

/// Sz(2^(2m+1)) as 4×4 matrices over GF(q), generated by the unipotent
/// matrices S(a, b), a torus element and the antidiagonal involution.
pub fn build_suzuki(m: u32, allow_big_memory: bool) -> Result<GroupTable, GroupError> {
    if m == 0 {
        return Err(GroupError::InvalidParameters(
            "Suzuki groups need m ≥ 1".into(),
        ));
    }
    if m > 2 {
        return Err(GroupError::InvalidParameters(format!(
            "m = {m} is out of range"
        )));
    }
    let q = 1u64 << (2 * m + 1);
    let expected = q * q * (q * q + 1) * (q - 1);
    let cap = if allow_big_memory {
        SUZUKI_BIG_CAP
    } else {
        ENUMERATION_CAP
    };
    if expected > cap {
        return Err(GroupError::OrderCapExceeded {
            order: expected,
            cap,
        });
    }
    let field = field_for(q as u32)?;
    let theta_exp = 1u64 << (m + 1);
    let theta = |a: Word| field.pow(a, theta_exp);
    let f = &field;
    let s = |a: Word, b: Word| -> Vec<Word> {
        let at = theta(a);
        let a2 = f.mul(a, a);
        let r30 = f.add(f.add(f.mul(a2, at), f.mul(a, b)), theta(b));
        let r31 = f.add(f.mul(a, at), b);
        vec![1, 0, 0, 0, a, 1, 0, 0, b, at, 1, 0, r30, r31, a, 1]
    };
    let mut gens = Vec::new();
    for t in 0..(2 * m + 1) {
        let x = 1 << t;
        gens.push(s(x, 0));
        gens.push(s(0, x));
    }
    // torus: diag(κ^(1+2^m), κ^(2^m), κ^(-2^m), κ^(-1-2^m))
    let kappa = field.primitive_element();
    let half = 1u64 << m;
    let k1 = field.pow(kappa, 1 + half);
    let k2 = field.pow(kappa, half);
    gens.push(vec![
        k1,
        0,
        0,
        0,
        0,
        k2,
        0,
        0,
        0,
        0,
        field.inv(k2),
        0,
        0,
        0,
        0,
        field.inv(k1),
    ]);
    gens.push(vec![0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0]);
    let carrier = Carrier::Matrix {
        dim: 4,
        field: field.clone(),
        projective: false,
    };
    GroupTable::from_generators(GroupFamily::Suzuki { m }, carrier, &gens, expected)
}

/// Extra-special group of order `p^(2n+1)` as pairs `(v, z)`.
pub fn build_extraspecial(
    p: u32,
    n: u32,
    form: ExtraspecialForm,
) -> Result<GroupTable, GroupError> {
    if !crate::field::is_prime(p) || n == 0 {
        return Err(GroupError::InvalidParameters(format!(
            "extra-special groups need prime p and n ≥ 1, got p = {p}, n = {n}"
        )));
    }
    let order = (p as u64)
        .checked_pow(2 * n + 1)
        .filter(|&o| o <= EXTRASPECIAL_CAP)
        .ok_or(GroupError::OrderCapExceeded {
            order: u64::MAX,
            cap: EXTRASPECIAL_CAP,
        })?;
    let width = 2 * n as usize + 1;
    let mut data = Vec::with_capacity(order as usize * width);
    for code in 0..order {
        let mut c = code;
        for _ in 0..width {
            data.push((c % p as u64) as Word);
            c /= p as u64;
        }
    }
    // index of a unit vector e_i is p^i
    let generators = (0..width - 1).map(|i| (p as usize).pow(i as u32)).collect();
    let carrier = Carrier::Extraspecial {
        p: p as Word,
        n: n as usize,
        minus: form == ExtraspecialForm::Minus,
    };
    GroupTable::from_elements(
        GroupFamily::Extraspecial { p, n, form },
        carrier,
        data,
        generators,
    )
}

fn next_permutation(a: &mut [Word]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn is_even(perm: &[Word]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

fn cycle(degree: usize, points: &[usize]) -> Vec<Word> {
    let mut p: Vec<Word> = (0..degree as Word).collect();
    for w in 0..points.len() {
        p[points[w]] = points[(w + 1) % points.len()] as Word;
    }
    p
}

pub fn build_named(group: NamedGroup) -> Result<GroupTable, GroupError> {
    let family = GroupFamily::Named { group };
    let too_big = |order: u64| GroupError::OrderCapExceeded {
        order,
        cap: NAMED_CAP,
    };
    match group {
        NamedGroup::Dihedral(k) => {
            if k == 0 {
                return Err(GroupError::InvalidParameters("dihedral(0)".into()));
            }
            if 2 * k as u64 > NAMED_CAP {
                return Err(too_big(2 * k as u64));
            }
            let mut data = Vec::new();
            for s in 0..2 {
                for r in 0..k as Word {
                    data.extend_from_slice(&[r, s]);
                }
            }
            let gens = if k > 1 { vec![1, k as usize] } else { vec![1] };
            GroupTable::from_elements(family, Carrier::Dihedral { k: k as Word }, data, gens)
        }
        NamedGroup::Symmetric(k) | NamedGroup::Alternating(k) => {
            let alt = matches!(group, NamedGroup::Alternating(_));
            if k == 0 {
                return Err(GroupError::InvalidParameters("degree 0".into()));
            }
            let full: u64 = (1..=k as u64).product();
            let order = if alt && k >= 2 { full / 2 } else { full };
            if order > NAMED_CAP {
                return Err(too_big(order));
            }
            let d = k as usize;
            let mut perm: Vec<Word> = (0..k as Word).collect();
            let mut data = Vec::new();
            loop {
                if !alt || is_even(&perm) {
                    data.extend_from_slice(&perm);
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let mut gen_perms = Vec::new();
            if alt {
                for i in 2..d {
                    gen_perms.push(cycle(d, &[0, 1, i]));
                }
            } else if d >= 2 {
                gen_perms.push(cycle(d, &[0, 1]));
                gen_perms.push(cycle(d, &(0..d).collect::<Vec<_>>()));
            }
            let carrier = Carrier::Permutation { degree: d };
            let index_of = |g: &Vec<Word>| {
                data.chunks_exact(d)
                    .position(|c| c == g.as_slice())
                    .unwrap()
            };
            let gens = gen_perms.iter().map(index_of).collect();
            GroupTable::from_elements(family, carrier, data, gens)
        }
        NamedGroup::Quaternion8 => {
            let es = build_extraspecial(2, 1, ExtraspecialForm::Minus)?;
            let carrier = es.carrier().clone();
            GroupTable::from_elements(
                family,
                carrier,
                es.raw_data().to_vec(),
                es.generators().to_vec(),
            )
        }
    }
}
