//! Fully enumerated finite groups.
//!
//! A [`GroupTable`] lists every element in a canonical encoding, with an
//! index for lookup, the identity position, inverse and order tables, and a
//! generating set. Tables are immutable after construction; derived
//! subgroup data (center, centralizers) is cached lazily.

mod build;
pub mod cache;
mod carrier;
mod subgroups;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use build::carrier_for;
pub use build::{
    build_extraspecial, build_linear, build_named, build_suzuki, expected_linear_order,
    ENUMERATION_CAP,
};
pub use carrier::{Carrier, Word, MAX_WIDTH};

use crate::bitset::BitSet;
use crate::field::{FieldElement, FieldError};

/// Index set over the elements of a group table.
pub type Subset = BitSet;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },
    #[error("closure exceeded the expected order {expected}; generators are wrong")]
    ClosureExceeded { expected: u64 },
    #[error("closure produced {found} elements, expected {expected}")]
    OrderMismatch { found: u64, expected: u64 },
    #[error("element {0} is central")]
    CentralElement(usize),
    #[error("{p}^2 divides the group order; the Sylow {p}-subgroup is not of prime order")]
    SylowNotCyclic { p: u64 },
    #[error("subset is not a subgroup")]
    NotSubgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearKind {
    Gl,
    Sl,
    Pgl,
    Psl,
}

impl LinearKind {
    pub fn is_projective(self) -> bool {
        matches!(self, LinearKind::Pgl | LinearKind::Psl)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtraspecialForm {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "name", content = "degree")]
pub enum NamedGroup {
    Dihedral(u32),
    Symmetric(u32),
    Alternating(u32),
    Quaternion8,
}

/// Family and parameters a table was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GroupFamily {
    Linear {
        kind: LinearKind,
        n: u32,
        q: u32,
    },
    Suzuki {
        m: u32,
    },
    Extraspecial {
        p: u32,
        n: u32,
        form: ExtraspecialForm,
    },
    Named {
        group: NamedGroup,
    },
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Linear { kind, n, q } => {
                let k = match kind {
                    LinearKind::Gl => "GL",
                    LinearKind::Sl => "SL",
                    LinearKind::Pgl => "PGL",
                    LinearKind::Psl => "PSL",
                };
                write!(f, "{k}({n},{q})")
            }
            GroupFamily::Suzuki { m } => write!(f, "Sz({})", 1u64 << (2 * m + 1)),
            GroupFamily::Extraspecial { p, n, form } => {
                let s = match form {
                    ExtraspecialForm::Plus => '+',
                    ExtraspecialForm::Minus => '-',
                };
                write!(f, "{p}^(1+{})_{s}", 2 * n)
            }
            GroupFamily::Named { group } => match group {
                NamedGroup::Dihedral(k) => write!(f, "D{}", 2 * k),
                NamedGroup::Symmetric(k) => write!(f, "S{k}"),
                NamedGroup::Alternating(k) => write!(f, "A{k}"),
                NamedGroup::Quaternion8 => write!(f, "Q8"),
            },
        }
    }
}

impl GroupFamily {
    /// Short stable token used for cache file names.
    pub fn slug(&self) -> String {
        match self {
            GroupFamily::Linear { kind, n, q } => format!("{kind:?}-{n}-{q}").to_lowercase(),
            GroupFamily::Suzuki { m } => format!("sz-{m}"),
            GroupFamily::Extraspecial { p, n, form } => {
                format!("es-{p}-{n}-{form:?}").to_lowercase()
            }
            GroupFamily::Named { group } => match group {
                NamedGroup::Dihedral(k) => format!("dihedral-{k}"),
                NamedGroup::Symmetric(k) => format!("symmetric-{k}"),
                NamedGroup::Alternating(k) => format!("alternating-{k}"),
                NamedGroup::Quaternion8 => "quaternion8".into(),
            },
        }
    }
}

/// Decoded view of a single element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Matrix {
        dim: usize,
        entries: Vec<FieldElement>,
    },
    ProjectiveMatrix {
        dim: usize,
        entries: Vec<FieldElement>,
    },
    Extraspecial {
        v: Vec<u32>,
        z: u32,
    },
    Permutation(Vec<u32>),
}

pub struct GroupTable {
    family: GroupFamily,
    carrier: Carrier,
    width: usize,
    data: Vec<Word>,
    index: HashMap<Box<[Word]>, u32>,
    identity: usize,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    generators: Vec<usize>,
    center: OnceLock<Subset>,
    centralizers: RwLock<HashMap<u32, Arc<Subset>>>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("family", &self.family)
            .field("order", &self.order())
            .finish()
    }
}

impl GroupTable {
    /// Breadth-first closure of `generators`, stopping with an error as soon as
    /// the element count passes `expected`.
    pub(crate) fn from_generators(
        family: GroupFamily,
        carrier: Carrier,
        generators: &[Vec<Word>],
        expected: u64,
    ) -> Result<Self, GroupError> {
        let width = carrier.width();
        let mut data: Vec<Word> = carrier.identity();
        let mut index: HashMap<Box<[Word]>, u32> = HashMap::new();
        index.insert(data.clone().into_boxed_slice(), 0);
        let mut gens: Vec<Vec<Word>> = Vec::new();
        for g in generators {
            let mut g = g.clone();
            carrier.canonicalize(&mut g);
            gens.push(g);
        }
        let mut buf = vec![0; width];
        let mut head = 0usize;
        while head < index.len() {
            for g in &gens {
                carrier.mul_into(&data[head * width..(head + 1) * width], g, &mut buf);
                if !index.contains_key(buf.as_slice()) {
                    if index.len() as u64 >= expected {
                        return Err(GroupError::ClosureExceeded { expected });
                    }
                    index.insert(buf.clone().into_boxed_slice(), index.len() as u32);
                    data.extend_from_slice(&buf);
                }
            }
            head += 1;
        }
        let found = index.len() as u64;
        if found != expected {
            return Err(GroupError::OrderMismatch { found, expected });
        }
        let gen_idx = gens.iter().map(|g| index[g.as_slice()] as usize).collect();
        Ok(Self::finish(family, carrier, data, index, gen_idx))
    }

    /// Wraps an explicit element list (already closed and canonical).
    pub(crate) fn from_elements(
        family: GroupFamily,
        carrier: Carrier,
        data: Vec<Word>,
        generators: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let width = carrier.width();
        let mut index = HashMap::with_capacity(data.len() / width);
        for (i, chunk) in data.chunks_exact(width).enumerate() {
            if index.insert(chunk.into(), i as u32).is_some() {
                return Err(GroupError::InvalidParameters(format!(
                    "duplicate element at {i}"
                )));
            }
        }
        if !index.contains_key(carrier.identity().as_slice()) {
            return Err(GroupError::InvalidParameters("identity missing".into()));
        }
        if generators.iter().any(|&g| g >= index.len()) {
            return Err(GroupError::InvalidParameters(
                "generator out of range".into(),
            ));
        }
        Ok(Self::finish(family, carrier, data, index, generators))
    }

    fn finish(
        family: GroupFamily,
        carrier: Carrier,
        data: Vec<Word>,
        index: HashMap<Box<[Word]>, u32>,
        generators: Vec<usize>,
    ) -> Self {
        let width = carrier.width();
        let n = index.len();
        let id = carrier.identity();
        let identity = index[id.as_slice()] as usize;
        let mut inverse = vec![0u32; n];
        let mut orders = vec![0u32; n];
        let mut cur = vec![0; width];
        let mut prev = vec![0; width];
        for i in 0..n {
            let g = &data[i * width..(i + 1) * width];
            cur.copy_from_slice(g);
            prev.copy_from_slice(&id);
            let mut k = 1u32;
            while cur != id {
                prev.copy_from_slice(&cur);
                carrier.mul_into(&prev, g, &mut cur);
                k += 1;
            }
            orders[i] = k;
            inverse[i] = index[prev.as_slice()];
        }
        GroupTable {
            family,
            carrier,
            width,
            data,
            index,
            identity,
            inverse,
            orders,
            generators,
            center: OnceLock::new(),
            centralizers: RwLock::new(HashMap::new()),
        }
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.orders.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Raw canonical encoding of element `i`.
    #[inline]
    pub fn encoding(&self, i: usize) -> &[Word] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub(crate) fn raw_data(&self) -> &[Word] {
        &self.data
    }

    pub fn index_of(&self, encoding: &[Word]) -> Option<usize> {
        self.index.get(encoding).map(|&i| i as usize)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut buf = [0; MAX_WIDTH];
        let w = self.width;
        self.carrier
            .mul_into(self.encoding(a), self.encoding(b), &mut buf[..w]);
        self.index[&buf[..w]] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    #[inline]
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.carrier.commutes(self.encoding(a), self.encoding(b))
    }

    /// `x⁻¹ g x`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inverse(x), g), x)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inverse(ba), ab)
    }

    pub fn element_order(&self, g: usize) -> u32 {
        self.orders[g]
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Sorted distinct element orders.
    pub fn order_profile(&self) -> Vec<u32> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn power(&self, g: usize, k: u64) -> usize {
        let k = k % self.orders[g] as u64;
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element(&self, i: usize) -> GroupElement {
        let e = self.encoding(i);
        match &self.carrier {
            Carrier::Matrix {
                dim,
                field,
                projective,
            } => {
                let entries = e
                    .iter()
                    .map(|&x| field.spec().from_index(x as u32))
                    .collect();
                if *projective {
                    GroupElement::ProjectiveMatrix { dim: *dim, entries }
                } else {
                    GroupElement::Matrix { dim: *dim, entries }
                }
            }
            Carrier::Extraspecial { n, .. } => GroupElement::Extraspecial {
                v: e[..2 * n].iter().map(|&x| x as u32).collect(),
                z: e[2 * n] as u32,
            },
            Carrier::Permutation { .. } => {
                GroupElement::Permutation(e.iter().map(|&x| x as u32).collect())
            }
            Carrier::Dihedral { k } => {
                let (r, s) = (e[0] as u32, e[1]);
                let k = *k as u32;
                GroupElement::Permutation(
                    (0..k)
                        .map(|x| if s == 1 { (r + k - x) % k } else { (x + r) % k })
                        .collect(),
                )
            }
        }
    }

    pub fn full_subset(&self) -> Subset {
        Subset::full(self.order())
    }

    /// Checks closure under products and inverses exhaustively. Quadratic.
    pub fn verify_closed(&self) -> bool {
        let n = self.order();
        let mut buf = [0; MAX_WIDTH];
        for a in 0..n {
            if self.mul(a, self.inverse(a)) != self.identity {
                return false;
            }
            for b in 0..n {
                self.carrier
                    .mul_into(self.encoding(a), self.encoding(b), &mut buf[..self.width]);
                if !self.index.contains_key(&buf[..self.width]) {
                    return false;
                }
            }
        }
        true
    }
}
