//! Clique-number certificates built from centralizer structure.
//!
//! The central object is the family of maximal bicentralizers `Z(C(g))`.
//! They are abelian and cover `G ∖ Z(G)`, so their number bounds `ω` from
//! above. A class `K` with an element `w` satisfying `C(w) = K` supplies a
//! witness, and witnesses of distinct classes never commute, so when every
//! class has one the two bounds meet.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};
use std::time::Duration;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clique::{
    max_clique_exact, CliqueError, ColorClasses, SolveOptions, SolveStats, Status,
};
use crate::group::{GroupError, GroupTable, Subset};
use crate::ncgraph::{GraphError, NcGraph};

/// Upper limit on the number of parts during merge-closure.
pub const MAX_PARTS: usize = 10_000;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("group is abelian")]
    Abelian,
    #[error("group is not an AC-group")]
    NotAc,
    #[error("decomposition hypotheses failed: {0}")]
    HypothesesFailed(String),
    #[error("merge-closure produced more than {MAX_PARTS} parts")]
    TooManyParts,
    #[error("no exact abelian-cover certificate: {0}")]
    NoCertificate(String),
    #[error("solver budget exhausted with lower bound {lower}")]
    Budget { lower: usize },
    #[error("certificate check failed: {0}")]
    CertificateInvalid(String),
    #[error("methods disagree: {0}")]
    Inconsistency(String),
    #[error("no applicable method: {0}")]
    NoMethod(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    CoverCertificate,
    AcCount,
    Partition,
    BranchBound,
    ClosedForm,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaCertificate {
    pub omega: usize,
    pub method: Method,
    /// False when a solver stopped early; `omega` is then a lower bound.
    pub exact: bool,
    /// Pairwise non-commuting element indices.
    pub witness_clique: Vec<usize>,
    pub upper_bound_classes: usize,
    pub checks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolveStats>,
}

/// Abelian subset containing `Z(G)`, with an element whose centralizer is
/// exactly the class when one exists.
#[derive(Clone, Debug)]
pub struct AbelianCoverClass {
    pub members: Subset,
    pub witness: Option<usize>,
}

/// Distinct centralizers of the non-central elements.
#[derive(Debug)]
pub struct CentralizerData {
    /// Index into `distinct` per element, `u32::MAX` for central elements.
    pub of_element: Vec<u32>,
    pub distinct: Vec<Arc<Subset>>,
    /// Smallest element having each distinct centralizer.
    pub first_element: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionFlags {
    pub covers: bool,
    pub pairwise_center: bool,
    pub centralizer_closed: bool,
    pub proper: bool,
}

impl PartitionFlags {
    pub fn all(&self) -> bool {
        self.covers && self.pairwise_center && self.centralizer_closed && self.proper
    }
}

#[derive(Clone, Debug)]
pub struct PartitionDecomposition {
    pub parts: Vec<Subset>,
    pub flags: PartitionFlags,
    pub rounds: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartOmega {
    pub order: usize,
    pub abelian: bool,
    pub omega: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverGap {
    pub classes: usize,
    pub without_witness: usize,
    pub commuting_witnesses: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub enum CoverOutcome {
    Certified(OmegaCertificate),
    Gap(CoverGap),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionMethod {
    ClassCount,
    Solver,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionEntry {
    pub element: usize,
    pub classes_containing: Option<usize>,
    /// Exact size of the largest clique containing the element.
    pub max_clique_through: usize,
    pub extendable: bool,
    pub method: ExtensionMethod,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub omega: usize,
    pub entries: Vec<ExtensionEntry>,
}

impl ExtensionReport {
    pub fn all_extendable(&self) -> bool {
        self.entries.iter().all(|e| e.extendable)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExtensionEntry> {
        self.entries.iter().filter(|e| !e.extendable)
    }
}

/// A non-central element lying in several classes, with the resulting bound
/// on cliques through it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonExtendable {
    pub element: usize,
    pub classes_containing: usize,
    pub bound: usize,
    pub omega: usize,
}

/// Lazily computed structural data for one group.
pub struct Analysis<'g> {
    g: &'g GroupTable,
    cents: OnceLock<CentralizerData>,
    classes: OnceLock<Vec<AbelianCoverClass>>,
    membership: OnceLock<Vec<u32>>,
    cover: OnceLock<CoverOutcome>,
}

fn subset_hash(s: &Subset) -> u64 {
    let mut h = DefaultHasher::new();
    s.words().hash(&mut h);
    h.finish()
}

/// Interns subsets by content, keeping first-seen order.
#[derive(Default)]
struct Interner {
    by_hash: HashMap<u64, Vec<u32>>,
    items: Vec<Arc<Subset>>,
}

impl Interner {
    fn intern(&mut self, s: Arc<Subset>) -> (u32, bool) {
        let bucket = self.by_hash.entry(subset_hash(&s)).or_default();
        if let Some(&id) = bucket.iter().find(|&&id| *self.items[id as usize] == *s) {
            return (id, false);
        }
        let id = self.items.len() as u32;
        bucket.push(id);
        self.items.push(s);
        (id, true)
    }
}

impl<'g> Analysis<'g> {
    pub fn new(g: &'g GroupTable) -> Self {
        Analysis {
            g,
            cents: OnceLock::new(),
            classes: OnceLock::new(),
            membership: OnceLock::new(),
            cover: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &'g GroupTable {
        self.g
    }

    fn non_abelian(&self) -> Result<(), StructureError> {
        if self.g.center().count() == self.g.order() {
            Err(StructureError::Abelian)
        } else {
            Ok(())
        }
    }

    pub fn centralizers(&self) -> &CentralizerData {
        self.cents.get_or_init(|| {
            let g = self.g;
            let table = g.centralizer_table();
            let mut of_element = vec![NONE; g.order()];
            let mut interner = Interner::default();
            let mut by_ptr: HashMap<*const Subset, u32> = HashMap::new();
            let mut first_element = Vec::new();
            for (x, c) in table.iter().enumerate() {
                if g.is_central(x) {
                    continue;
                }
                let id = match by_ptr.get(&Arc::as_ptr(c)) {
                    Some(&id) => id,
                    None => {
                        let (id, fresh) = interner.intern(c.clone());
                        if fresh {
                            first_element.push(x);
                        }
                        by_ptr.insert(Arc::as_ptr(c), id);
                        id
                    }
                };
                of_element[x] = id;
            }
            CentralizerData {
                of_element,
                distinct: interner.items,
                first_element,
            }
        })
    }

    fn centralizer_of_element(&self, x: usize) -> &Subset {
        let c = self.centralizers();
        &c.distinct[c.of_element[x] as usize]
    }

    /// Every non-central centralizer is abelian.
    pub fn is_ac_group(&self) -> bool {
        self.centralizers()
            .distinct
            .iter()
            .all(|c| self.g.is_abelian_subgroup(c))
    }

    /// `ω` as the number of distinct non-central centralizers.
    pub fn ac_omega(&self) -> Result<OmegaCertificate, StructureError> {
        self.non_abelian()?;
        if !self.is_ac_group() {
            return Err(StructureError::NotAc);
        }
        let data = self.centralizers();
        let clique = data.first_element.clone();
        let mut checks = vec![format!(
            "{} distinct centralizers, all abelian",
            data.distinct.len()
        )];
        self.verify_clique(&clique)?;
        checks.push(format!("witness clique of size {} verified", clique.len()));
        Ok(OmegaCertificate {
            omega: clique.len(),
            method: Method::AcCount,
            exact: true,
            witness_clique: clique,
            upper_bound_classes: data.distinct.len(),
            checks,
            solver: None,
        })
    }

    /// Distinct non-central centralizer counts keyed by centralizer order.
    pub fn centralizer_order_counts(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for c in &self.centralizers().distinct {
            *counts.entry(c.count()).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Maximal members of `{Z(C(g)) : g ∉ Z(G)}` in order of first discovery.
    pub fn maximal_bicentralizer_classes(&self) -> &[AbelianCoverClass] {
        self.classes.get_or_init(|| {
            let g = self.g;
            let data = self.centralizers();
            let mut interner = Interner::default();
            for c in &data.distinct {
                interner.intern(Arc::new(g.center_of(c)));
            }
            let bics = interner.items;
            let mut containing: Vec<Vec<u32>> = vec![Vec::new(); g.order()];
            for (i, b) in bics.iter().enumerate() {
                for x in b.iter().filter(|&x| !g.is_central(x)) {
                    containing[x].push(i as u32);
                }
            }
            let mut classes = Vec::new();
            for (i, b) in bics.iter().enumerate() {
                let pivot = b
                    .iter()
                    .filter(|&x| !g.is_central(x))
                    .min_by_key(|&x| containing[x].len())
                    .expect("bicentralizer of a non-central element is non-central");
                let dominated = containing[pivot].iter().any(|&j| {
                    j as usize != i
                        && bics[j as usize].count() > b.count()
                        && b.is_subset(&bics[j as usize])
                });
                if dominated {
                    continue;
                }
                let witness = b
                    .iter()
                    .find(|&w| !g.is_central(w) && *self.centralizer_of_element(w) == **b);
                classes.push(AbelianCoverClass {
                    members: (**b).clone(),
                    witness,
                });
            }
            classes
        })
    }

    fn membership(&self) -> &[u32] {
        self.membership.get_or_init(|| {
            let mut m = vec![0u32; self.g.order()];
            for class in self.maximal_bicentralizer_classes() {
                for x in class.members.iter() {
                    m[x] += 1;
                }
            }
            m
        })
    }

    /// Number of maximal classes containing a non-central element.
    pub fn class_membership_count(&self, x: usize) -> Result<usize, StructureError> {
        if self.g.is_central(x) {
            return Err(GroupError::CentralElement(x).into());
        }
        Ok(self.membership()[x] as usize)
    }

    fn verify_clique(&self, clique: &[usize]) -> Result<(), StructureError> {
        let g = self.g;
        for (i, &a) in clique.iter().enumerate() {
            if g.is_central(a) {
                return Err(StructureError::CertificateInvalid(format!(
                    "clique member {a} is central"
                )));
            }
            if let Some(&b) = clique[i + 1..].iter().find(|&&b| g.commutes(a, b)) {
                return Err(StructureError::CertificateInvalid(format!(
                    "clique members {a} and {b} commute"
                )));
            }
        }
        Ok(())
    }

    /// Certificate from the maximal bicentralizer cover, or a gap report.
    pub fn cover_certificate_omega(&self) -> Result<&CoverOutcome, StructureError> {
        self.non_abelian()?;
        if let Some(c) = self.cover.get() {
            return Ok(c);
        }
        let outcome = self.compute_cover()?;
        Ok(self.cover.get_or_init(|| outcome))
    }

    fn compute_cover(&self) -> Result<CoverOutcome, StructureError> {
        let g = self.g;
        let classes = self.maximal_bicentralizer_classes();
        let mut checks = Vec::new();
        // every class abelian
        if let Some(i) = classes
            .iter()
            .position(|c| !g.is_abelian_subgroup(&c.members))
        {
            return Err(StructureError::CertificateInvalid(format!(
                "class {i} is not abelian"
            )));
        }
        checks.push(format!("{} classes, all abelian", classes.len()));
        // every non-central element covered
        let membership = self.membership();
        if let Some(x) = (0..g.order()).find(|&x| !g.is_central(x) && membership[x] == 0) {
            return Err(StructureError::CertificateInvalid(format!(
                "element {x} is not covered"
            )));
        }
        checks.push("classes cover every non-central element".into());
        let without_witness = classes.iter().filter(|c| c.witness.is_none()).count();
        if without_witness > 0 {
            return Ok(CoverOutcome::Gap(CoverGap {
                classes: classes.len(),
                without_witness,
                commuting_witnesses: None,
            }));
        }
        let clique: Vec<usize> = classes.iter().map(|c| c.witness.unwrap()).collect();
        for (i, &a) in clique.iter().enumerate() {
            if let Some(&b) = clique[i + 1..].iter().find(|&&b| g.commutes(a, b)) {
                return Ok(CoverOutcome::Gap(CoverGap {
                    classes: classes.len(),
                    without_witness: 0,
                    commuting_witnesses: Some((a, b)),
                }));
            }
        }
        checks.push(format!("{} witnesses pairwise non-commuting", clique.len()));
        Ok(CoverOutcome::Certified(OmegaCertificate {
            omega: clique.len(),
            method: Method::CoverCertificate,
            exact: true,
            witness_clique: clique,
            upper_bound_classes: classes.len(),
            checks,
            solver: None,
        }))
    }

    /// Classes as a colouring of a graph whose vertices are `elements`.
    fn class_coloring(&self, elements: &[usize]) -> ColorClasses {
        let classes = self.maximal_bicentralizer_classes();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
        for (v, &x) in elements.iter().enumerate() {
            let c = classes
                .iter()
                .position(|c| c.members.contains(x))
                .expect("classes cover non-central elements");
            buckets[c].push(v);
        }
        ColorClasses::new(buckets.into_iter().filter(|b| !b.is_empty()).collect())
    }

    /// Merge-closure of the distinct centralizers with hypothesis flags.
    pub fn partition_decompose(&self) -> Result<PartitionDecomposition, StructureError> {
        self.non_abelian()?;
        let g = self.g;
        let mut parts: Vec<Subset> = self
            .centralizers()
            .distinct
            .iter()
            .map(|c| (**c).clone())
            .collect();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let groups = merge_groups(g, &parts);
            if groups.iter().all(|grp| grp.len() == 1) {
                break;
            }
            let mut next: Vec<Subset> = Vec::with_capacity(groups.len());
            for grp in groups {
                if grp.len() == 1 {
                    next.push(parts[grp[0]].clone());
                } else {
                    let mut union = Subset::new(g.order());
                    for &i in &grp {
                        union.union_with(&parts[i]);
                    }
                    next.push(g.closure(&g.subgroup_generators(&union)));
                }
            }
            if next.len() > MAX_PARTS {
                return Err(StructureError::TooManyParts);
            }
            parts = next;
        }
        let flags = self.partition_flags(&parts);
        Ok(PartitionDecomposition {
            parts,
            flags,
            rounds,
        })
    }

    fn partition_flags(&self, parts: &[Subset]) -> PartitionFlags {
        let g = self.g;
        let mut count = vec![0u32; g.order()];
        for p in parts {
            for x in p.iter() {
                count[x] += 1;
            }
        }
        let covers = count.iter().all(|&c| c > 0);
        let center = g.center();
        let pairwise_center = parts.iter().all(|p| center.is_subset(p))
            && (0..g.order()).all(|x| g.is_central(x) || count[x] == 1);
        let centralizer_closed = parts.iter().all(|p| {
            p.iter()
                .filter(|&x| !g.is_central(x))
                .all(|x| self.centralizer_of_element(x).is_subset(p))
        });
        let proper = parts.iter().all(|p| p.count() < g.order());
        PartitionFlags {
            covers,
            pairwise_center,
            centralizer_closed,
            proper,
        }
    }

    /// Sum of part clique numbers, abelian parts counting 1.
    pub fn partition_omega(
        &self,
        solve: &SolveOptions,
    ) -> Result<(OmegaCertificate, Vec<PartOmega>), StructureError> {
        let dec = self.partition_decompose()?;
        if !dec.flags.all() {
            return Err(StructureError::HypothesesFailed(format!("{:?}", dec.flags)));
        }
        let g = self.g;
        let mut clique = Vec::new();
        let mut per_part = Vec::with_capacity(dec.parts.len());
        for part in &dec.parts {
            if g.is_abelian_subgroup(part) {
                let x = part.iter().find(|&x| !g.is_central(x)).unwrap();
                clique.push(x);
                per_part.push(PartOmega {
                    order: part.count(),
                    abelian: true,
                    omega: 1,
                });
                continue;
            }
            let graph = NcGraph::of_subgroup(g, part, false)?.collapse_by_center(g)?;
            let r = max_clique_exact(graph.graph(), solve)?;
            if r.status != Status::Exact {
                return Err(StructureError::Budget { lower: r.size });
            }
            clique.extend(graph.elements_of(&r.members));
            per_part.push(PartOmega {
                order: part.count(),
                abelian: false,
                omega: r.size,
            });
        }
        self.verify_clique(&clique)?;
        let omega: usize = per_part.iter().map(|p| p.omega).sum();
        let non_abelian = per_part.iter().filter(|p| !p.abelian).count();
        let checks = vec![
            format!(
                "{} parts after {} merge rounds",
                dec.parts.len(),
                dec.rounds
            ),
            format!("hypotheses {:?}", dec.flags),
            format!("{non_abelian} non-abelian parts solved exactly"),
            format!("witness clique of size {} verified", clique.len()),
        ];
        Ok((
            OmegaCertificate {
                omega,
                method: Method::Partition,
                exact: true,
                witness_clique: clique,
                upper_bound_classes: omega,
                checks,
                solver: None,
            },
            per_part,
        ))
    }

    /// Branch-and-bound on the center-collapsed graph. With `hint`, the
    /// maximal classes serve as the initial colouring bound.
    pub fn solver_omega(
        &self,
        solve: &SolveOptions,
        hint: bool,
        allow_big_memory: bool,
    ) -> Result<OmegaCertificate, StructureError> {
        self.non_abelian()?;
        let g = self.g;
        let graph = NcGraph::build(g, allow_big_memory)?.collapse_by_center(g)?;
        let mut opts = solve.clone();
        if hint {
            opts.color_hint = Some(self.class_coloring(graph.vertices()));
        }
        let r = max_clique_exact(graph.graph(), &opts)?;
        let clique = graph.elements_of(&r.members);
        self.verify_clique(&clique)?;
        let exact = r.status == Status::Exact;
        Ok(OmegaCertificate {
            omega: r.size,
            method: Method::BranchBound,
            exact,
            witness_clique: clique,
            upper_bound_classes: if exact { r.size } else { r.stats.root_bound },
            checks: vec![format!(
                "{} collapsed vertices, {} nodes, root bound {} ({:?})",
                graph.vertices().len(),
                r.stats.nodes,
                r.stats.root_bound,
                r.stats.bound_source
            )],
            solver: Some(r.stats),
        })
    }

    /// Largest clique through each element of `elements`, compared to `omega`.
    ///
    /// With an exact cover certificate the answer is `1 + (#classes − k)`
    /// for an element in `k` classes, realised by the element together with
    /// the witnesses of the other classes. Otherwise the neighbourhood of
    /// the element in the collapsed graph is solved exactly.
    pub fn singleton_extension_check(
        &self,
        omega: usize,
        elements: &[usize],
        solve: &SolveOptions,
    ) -> Result<ExtensionReport, StructureError> {
        let g = self.g;
        let mut entries = Vec::with_capacity(elements.len());
        if let CoverOutcome::Certified(cert) = self.cover_certificate_omega()? {
            if cert.omega != omega {
                return Err(StructureError::Inconsistency(format!(
                    "cover gives {}, caller supplied {omega}",
                    cert.omega
                )));
            }
            let classes = self.maximal_bicentralizer_classes();
            for &x in elements {
                let k = self.class_membership_count(x)?;
                let mut clique = vec![x];
                clique.extend(
                    classes
                        .iter()
                        .filter(|c| !c.members.contains(x))
                        .map(|c| c.witness.unwrap()),
                );
                self.verify_clique(&clique)?;
                debug_assert_eq!(clique.len(), 1 + classes.len() - k);
                entries.push(ExtensionEntry {
                    element: x,
                    classes_containing: Some(k),
                    max_clique_through: clique.len(),
                    extendable: clique.len() == omega,
                    method: ExtensionMethod::ClassCount,
                });
            }
            return Ok(ExtensionReport { omega, entries });
        }
        let full = NcGraph::build(g, false)?.collapse_by_center(g)?;
        let map = full.coset_map().unwrap();
        for &x in elements {
            if g.is_central(x) {
                return Err(GroupError::CentralElement(x).into());
            }
            let v = map[x] as usize;
            let nb: Vec<usize> = full.graph().neighbors(v).to_vec();
            let sub = full.graph().induced(&nb);
            let r = max_clique_exact(&sub, solve)?;
            if r.status != Status::Exact {
                return Err(StructureError::Budget { lower: r.size + 1 });
            }
            entries.push(ExtensionEntry {
                element: x,
                classes_containing: None,
                max_clique_through: r.size + 1,
                extendable: r.size + 1 == omega,
                method: ExtensionMethod::Solver,
            });
        }
        Ok(ExtensionReport { omega, entries })
    }

    /// First non-central element (by index) lying in two or more classes of
    /// an exact cover certificate.
    pub fn non_extendable_witness(&self) -> Result<Option<NonExtendable>, StructureError> {
        let cert = match self.cover_certificate_omega()? {
            CoverOutcome::Certified(c) => c,
            CoverOutcome::Gap(gap) => {
                return Err(StructureError::NoCertificate(format!("{gap:?}")))
            }
        };
        let classes = self.maximal_bicentralizer_classes().len();
        let g = self.g;
        for x in 0..g.order() {
            if g.is_central(x) {
                continue;
            }
            let k = self.class_membership_count(x)?;
            if k >= 2 {
                return Ok(Some(NonExtendable {
                    element: x,
                    classes_containing: k,
                    bound: 1 + classes - k,
                    omega: cert.omega,
                }));
            }
        }
        Ok(None)
    }

    pub fn noncentral_elements(&self) -> Vec<usize> {
        (0..self.g.order())
            .filter(|&x| !self.g.is_central(x))
            .collect()
    }

    /// `count` distinct non-central elements drawn uniformly with a seeded
    /// generator, in draw order.
    pub fn sample_noncentral(&self, count: usize, seed: u64) -> Vec<usize> {
        let pool = self.noncentral_elements();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample(&mut rng, pool.len(), count.min(pool.len()))
            .into_iter()
            .map(|i| pool[i])
            .collect()
    }
}

/// Groups of parts connected by shared non-central elements.
fn merge_groups(g: &GroupTable, parts: &[Subset]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..parts.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner = vec![NONE; g.order()];
    for (i, p) in parts.iter().enumerate() {
        for x in p.iter().filter(|&x| !g.is_central(x)) {
            if owner[x] == NONE {
                owner[x] = i as u32;
            } else {
                let (a, b) = (find(&mut parent, owner[x] as usize), find(&mut parent, i));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..parts.len() {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(i);
    }
    groups
}

/// Which methods `omega` runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    #[default]
    Auto,
    Ac,
    Cover,
    Partition,
    Solver,
}

#[derive(Clone, Debug)]
pub struct OmegaOptions {
    pub method: MethodChoice,
    pub solve: SolveOptions,
    /// In auto mode the solver only runs on collapsed graphs up to this size.
    pub solver_vertex_limit: usize,
    pub allow_big_memory: bool,
    /// Exact value or inclusive range from a closed formula, if known.
    pub expected: Option<(usize, usize)>,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        OmegaOptions {
            method: MethodChoice::Auto,
            solve: SolveOptions {
                node_limit: 5_000_000,
                time_limit: Some(Duration::from_secs(120)),
                ..Default::default()
            },
            solver_vertex_limit: 800,
            allow_big_memory: false,
            expected: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub omega: Option<usize>,
    pub exact: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaReport {
    pub certificate: OmegaCertificate,
    pub outcomes: Vec<MethodOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_parts: Option<Vec<PartOmega>>,
}

impl OmegaReport {
    pub fn agreeing_methods(&self) -> Vec<Method> {
        self.outcomes
            .iter()
            .filter(|o| o.exact && o.omega == Some(self.certificate.omega))
            .map(|o| o.method)
            .collect()
    }
}

fn outcome(method: Method, cert: &OmegaCertificate) -> MethodOutcome {
    MethodOutcome {
        method,
        omega: Some(cert.omega),
        exact: cert.exact,
        note: cert.checks.join("; "),
    }
}

fn skipped(method: Method, note: impl Into<String>) -> MethodOutcome {
    MethodOutcome {
        method,
        omega: None,
        exact: false,
        note: note.into(),
    }
}

/// Runs the selected methods and cross-checks every exact answer.
pub fn omega(g: &GroupTable, opts: &OmegaOptions) -> Result<OmegaReport, StructureError> {
    let a = Analysis::new(g);
    a.non_abelian()?;
    let auto = opts.method == MethodChoice::Auto;
    let mut certs: Vec<OmegaCertificate> = Vec::new();
    let mut outcomes = Vec::new();
    let mut partition_parts = None;

    if auto || opts.method == MethodChoice::Ac {
        match a.ac_omega() {
            Ok(c) => {
                outcomes.push(outcome(Method::AcCount, &c));
                certs.push(c);
            }
            Err(StructureError::NotAc) if auto => {
                outcomes.push(skipped(Method::AcCount, "not an AC-group"))
            }
            Err(e) => return Err(e),
        }
    }
    if auto || opts.method == MethodChoice::Cover {
        match a.cover_certificate_omega()? {
            CoverOutcome::Certified(c) => {
                outcomes.push(outcome(Method::CoverCertificate, c));
                certs.push(c.clone());
            }
            CoverOutcome::Gap(gap) if auto => outcomes.push(skipped(
                Method::CoverCertificate,
                format!(
                    "certificate gap: {} classes, {} without witness",
                    gap.classes, gap.without_witness
                ),
            )),
            CoverOutcome::Gap(gap) => {
                return Err(StructureError::NoCertificate(format!("{gap:?}")))
            }
        }
    }
    if auto || opts.method == MethodChoice::Partition {
        match a.partition_omega(&opts.solve) {
            Ok((c, parts)) => {
                outcomes.push(outcome(Method::Partition, &c));
                certs.push(c);
                partition_parts = Some(parts);
            }
            Err(StructureError::HypothesesFailed(f)) if auto => outcomes.push(skipped(
                Method::Partition,
                format!("hypotheses failed: {f}"),
            )),
            Err(e) => return Err(e),
        }
    }
    if auto || opts.method == MethodChoice::Solver {
        let collapsed = g.order() / g.center().count() - 1;
        if auto && collapsed > opts.solver_vertex_limit {
            outcomes.push(skipped(
                Method::BranchBound,
                format!("{collapsed} collapsed vertices exceeds the auto limit"),
            ));
        } else {
            let c = a.solver_omega(&opts.solve, auto, opts.allow_big_memory)?;
            outcomes.push(outcome(Method::BranchBound, &c));
            certs.push(c);
        }
    }

    let exact: Vec<&OmegaCertificate> = certs.iter().filter(|c| c.exact).collect();
    if let Some(first) = exact.first() {
        if let Some(bad) = exact.iter().find(|c| c.omega != first.omega) {
            return Err(StructureError::Inconsistency(format!(
                "{:?} gives {}, {:?} gives {}",
                first.method, first.omega, bad.method, bad.omega
            )));
        }
        if let Some(low) = certs.iter().find(|c| !c.exact && c.omega > first.omega) {
            return Err(StructureError::Inconsistency(format!(
                "{:?} found a clique of size {} above {}",
                low.method, low.omega, first.omega
            )));
        }
        if let Some((lo, hi)) = opts.expected {
            if first.omega < lo || first.omega > hi {
                return Err(StructureError::Inconsistency(format!(
                    "closed form expects {lo}..={hi}, computed {}",
                    first.omega
                )));
            }
        }
    }
    let certificate = exact
        .first()
        .map(|c| (*c).clone())
        .or_else(|| certs.first().cloned())
        .ok_or_else(|| {
            StructureError::NoMethod(
                outcomes
                    .iter()
                    .map(|o| format!("{:?}: {}", o.method, o.note))
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
    Ok(OmegaReport {
        certificate,
        outcomes,
        partition_parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;

    #[test]
    fn psl27_is_not_ac_but_cover_certifies_57() {
        let g = build_linear(LinearKind::Psl, 2, 7).unwrap();
        let a = Analysis::new(&g);
        assert!(!a.is_ac_group());
        assert!(matches!(a.ac_omega(), Err(StructureError::NotAc)));
        match a.cover_certificate_omega().unwrap() {
            CoverOutcome::Certified(c) => assert_eq!(c.omega, 57),
            CoverOutcome::Gap(gap) => panic!("{gap:?}"),
        }
        assert!(a.non_extendable_witness().unwrap().is_none());
    }

    #[test]
    fn a5_is_ac() {
        let g = build_named(NamedGroup::Alternating(5)).unwrap();
        let a = Analysis::new(&g);
        assert!(a.is_ac_group());
        assert_eq!(a.ac_omega().unwrap().omega, 21);
    }

    #[test]
    fn extraspecial_classes_and_gap() {
        let g = build_extraspecial(2, 2, ExtraspecialForm::Plus).unwrap();
        let a = Analysis::new(&g);
        let classes = a.maximal_bicentralizer_classes();
        assert_eq!(classes.len(), 15);
        assert!(classes.iter().all(|c| c.members.count() == 4));
        assert!(matches!(
            a.cover_certificate_omega().unwrap(),
            CoverOutcome::Gap(_)
        ));
        let g = build_extraspecial(3, 2, ExtraspecialForm::Plus).unwrap();
        let a = Analysis::new(&g);
        match a.cover_certificate_omega().unwrap() {
            CoverOutcome::Gap(gap) => assert_eq!(gap.without_witness, gap.classes),
            CoverOutcome::Certified(_) => panic!("expected a gap"),
        }
    }

    #[test]
    fn class_membership_rejects_central() {
        let g = build_linear(LinearKind::Sl, 2, 5).unwrap();
        let a = Analysis::new(&g);
        assert!(a.class_membership_count(g.identity()).is_err());
    }

    #[test]
    fn dispatch_agrees_on_small_groups() {
        for (g, w) in [
            (build_named(NamedGroup::Symmetric(3)).unwrap(), 4),
            (build_named(NamedGroup::Quaternion8).unwrap(), 3),
            (build_linear(LinearKind::Pgl, 2, 3).unwrap(), 10),
            (build_linear(LinearKind::Psl, 2, 5).unwrap(), 21),
        ] {
            let r = omega(&g, &OmegaOptions::default()).unwrap();
            assert_eq!(r.certificate.omega, w, "{}", g.family());
            assert!(r.agreeing_methods().contains(&Method::BranchBound));
        }
    }

    #[test]
    fn expected_mismatch_is_inconsistency() {
        let g = build_named(NamedGroup::Symmetric(3)).unwrap();
        let opts = OmegaOptions {
            expected: Some((5, 5)),
            ..Default::default()
        };
        assert!(matches!(
            omega(&g, &opts),
            Err(StructureError::Inconsistency(_))
        ));
    }
}
