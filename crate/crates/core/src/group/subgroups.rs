//! Subgroup computations on an enumerated table.

use std::sync::Arc;

use super::{GroupError, GroupTable, Subset};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GroupTable {
    /// `Z(G)`: elements commuting with every generator.
    pub fn center(&self) -> &Subset {
        self.center.get_or_init(|| {
            let mut z = Subset::new(self.order());
            for x in 0..self.order() {
                if self.generators.iter().all(|&g| self.commutes(x, g)) {
                    z.insert(x);
                }
            }
            z
        })
    }

    pub fn is_central(&self, g: usize) -> bool {
        self.center().contains(g)
    }

    /// Smallest index among the generators of `⟨g⟩`; elements with the same
    /// key have the same centralizer.
    pub fn cyclic_key(&self, g: usize) -> usize {
        let ord = self.orders[g];
        let mut best = g;
        let mut x = g;
        for k in 2..ord {
            x = self.mul(x, g);
            if gcd(k, ord) == 1 && x < best {
                best = x;
            }
        }
        best
    }

    /// `C_G(g)`, cached per cyclic subgroup.
    pub fn centralizer(&self, g: usize) -> Arc<Subset> {
        let key = self.cyclic_key(g) as u32;
        if let Some(c) = self.centralizers.read().unwrap().get(&key) {
            return c.clone();
        }
        let c = Arc::new(self.centralizer_uncached(g));
        self.centralizers
            .write()
            .unwrap()
            .entry(key)
            .or_insert(c)
            .clone()
    }

    pub(crate) fn centralizer_uncached(&self, g: usize) -> Subset {
        let n = self.order();
        let gi = self.encoding(g);
        let mut words = vec![0u64; n.div_ceil(64)];
        for h in 0..n {
            if self.carrier.commutes(gi, self.encoding(h)) {
                words[h >> 6] |= 1 << (h & 63);
            }
        }
        Subset::from_words(n, words)
    }

    /// `C_G(g)` for every element, indexed by element.
    ///
    /// One centralizer is scanned per conjugacy class; the rest are obtained
    /// by conjugating it along a transversal, since `C(x^h) = C(x)^h`.
    pub fn centralizer_table(&self) -> Vec<Arc<Subset>> {
        let n = self.order();
        let mut table: Vec<Option<Arc<Subset>>> = vec![None; n];
        for x in 0..n {
            if table[x].is_some() {
                continue;
            }
            let cx = self.centralizer(x);
            table[x] = Some(cx.clone());
            let members: Vec<usize> = cx.iter().collect();
            // conjugation orbit of x with a conjugating element for each point
            let mut queue = vec![(x, self.identity)];
            let mut head = 0;
            while head < queue.len() {
                let (y, h) = queue[head];
                head += 1;
                for &s in &self.generators {
                    let z = self.conjugate(y, s);
                    if table[z].is_some() {
                        continue;
                    }
                    let hs = self.mul(h, s);
                    let key = self.cyclic_key(z) as u32;
                    let cached = self.centralizers.read().unwrap().get(&key).cloned();
                    let cz = cached.unwrap_or_else(|| {
                        let mut c = Subset::new(n);
                        for &m in &members {
                            c.insert(self.conjugate(m, hs));
                        }
                        let c = Arc::new(c);
                        self.centralizers.write().unwrap().insert(key, c.clone());
                        c
                    });
                    table[z] = Some(cz);
                    queue.push((z, hs));
                }
            }
        }
        table.into_iter().map(|c| c.unwrap()).collect()
    }

    /// Elements commuting with every member of `gens`.
    pub fn centralizer_of(&self, gens: &[usize]) -> Subset {
        let mut c = Subset::new(self.order());
        for h in 0..self.order() {
            if gens.iter().all(|&g| self.commutes(g, h)) {
                c.insert(h);
            }
        }
        c
    }

    /// `C_G(C_G(g))`, which is the center of `C_G(g)`.
    pub fn bicentralizer(&self, g: usize) -> Result<Subset, GroupError> {
        if self.is_central(g) {
            return Err(GroupError::CentralElement(g));
        }
        let c = self.centralizer(g);
        Ok(self.center_of(&c))
    }

    /// `Z(H)` for a subgroup `H`.
    pub fn center_of(&self, h: &Subset) -> Subset {
        let gens = self.subgroup_generators(h);
        let mut z = Subset::new(self.order());
        for x in h.iter() {
            if gens.iter().all(|&g| self.commutes(x, g)) {
                z.insert(x);
            }
        }
        z
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Subset {
        let mut set = Subset::new(self.order());
        set.insert(self.identity);
        let mut list = vec![self.identity];
        self.grow(&mut set, &mut list, gens);
        set
    }

    /// Closes `set` under right multiplication by `gens`; returns how many
    /// elements were added.
    fn grow(&self, set: &mut Subset, list: &mut Vec<usize>, gens: &[usize]) -> usize {
        let before = list.len();
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    list.push(y);
                }
            }
            head += 1;
        }
        list.len() - before
    }

    /// A small generating set of the subgroup `h`, chosen greedily in index order.
    pub fn subgroup_generators(&self, h: &Subset) -> Vec<usize> {
        if h.count() == self.order() {
            return self.generators.clone();
        }
        let mut set = Subset::new(self.order());
        set.insert(self.identity);
        let mut list = vec![self.identity];
        let mut gens = Vec::new();
        for x in h.iter() {
            if !set.contains(x) {
                gens.push(x);
                self.grow(&mut set, &mut list, &gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, h: &Subset) -> bool {
        h.contains(self.identity) && self.closure(&h.to_vec()) == *h
    }

    /// Pairwise commutation test over the members of `s`.
    pub fn is_abelian(&self, s: &Subset) -> bool {
        let members = s.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !self.commutes(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Abelian test for a subgroup through its generators.
    pub fn is_abelian_subgroup(&self, h: &Subset) -> bool {
        let gens = self.subgroup_generators(h);
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.commutes(a, b)))
    }

    /// Derived subgroup of a subgroup `h`, as the normal closure in `h` of
    /// the commutators of its generators.
    pub fn derived_subgroup_of(&self, h: &Subset) -> Subset {
        let gens = self.subgroup_generators(h);
        let mut normal_gens = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                let c = self.commutator(a, b);
                if c != self.identity {
                    normal_gens.push(c);
                }
            }
        }
        let mut n = self.closure(&normal_gens);
        loop {
            let mut added = false;
            let n_gens = self.subgroup_generators(&n);
            for &y in &n_gens {
                for &x in &gens {
                    let c = self.conjugate(y, x);
                    if !n.contains(c) {
                        normal_gens.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                return n;
            }
            n = self.closure(&normal_gens);
        }
    }

    pub fn derived_subgroup(&self) -> Subset {
        self.derived_subgroup_of(&self.full_subset())
    }

    /// Derived series of `h` reaches the trivial group.
    pub fn is_solvable_subgroup(&self, h: &Subset) -> bool {
        let mut cur = h.clone();
        loop {
            if cur.count() == 1 {
                return true;
            }
            let next = self.derived_subgroup_of(&cur);
            if next == cur {
                return false;
            }
            cur = next;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.is_solvable_subgroup(&self.full_subset())
    }

    /// Number of Sylow p-subgroups when `p` divides `|G|` exactly once.
    pub fn sylow_count_cyclic(&self, p: u64) -> Result<u64, GroupError> {
        let n = self.order() as u64;
        if p < 2 || !n.is_multiple_of(p) {
            return Err(GroupError::InvalidParameters(format!(
                "{p} does not divide |G| = {n}"
            )));
        }
        if n.is_multiple_of(p * p) {
            return Err(GroupError::SylowNotCyclic { p });
        }
        let count = self.orders.iter().filter(|&&o| o as u64 == p).count() as u64;
        Ok(count / (p - 1))
    }

    /// A Sylow `p`-subgroup, grown one factor of `p` at a time inside
    /// successive normalizers.
    pub fn sylow_subgroup(&self, p: u64) -> Result<Subset, GroupError> {
        let n = self.order() as u64;
        if p < 2 || p > u32::MAX as u64 || !crate::field::is_prime(p as u32) || !n.is_multiple_of(p)
        {
            return Err(GroupError::InvalidParameters(format!(
                "{p} is not a prime dividing |G| = {n}"
            )));
        }
        let mut target = 1u64;
        while n.is_multiple_of(target * p) {
            target *= p;
        }
        let mut h = self.closure(&[]);
        while (h.count() as u64) < target {
            let nrm = self.normalizer(&h);
            let x = nrm
                .iter()
                .find(|&x| !h.contains(x) && h.contains(self.power(x, p)))
                .expect("a normalizer of a non-Sylow p-subgroup has p-elements mod it");
            let mut gens = self.subgroup_generators(&h);
            gens.push(x);
            h = self.closure(&gens);
        }
        Ok(h)
    }

    /// Number of Sylow `p`-subgroups, `|G : N_G(P)|`.
    pub fn sylow_count(&self, p: u64) -> Result<u64, GroupError> {
        let s = self.sylow_subgroup(p)?;
        Ok(self.conjugate_count(&s) as u64)
    }

    /// `N_G(H)` for a subgroup `h`.
    pub fn normalizer(&self, h: &Subset) -> Subset {
        let gens = self.subgroup_generators(h);
        let mut nrm = Subset::new(self.order());
        for x in 0..self.order() {
            if gens.iter().all(|&g| h.contains(self.conjugate(g, x))) {
                nrm.insert(x);
            }
        }
        nrm
    }

    /// Number of conjugates of `H`, `|G : N_G(H)|`.
    pub fn conjugate_count(&self, h: &Subset) -> usize {
        self.order() / self.normalizer(h).count()
    }
}

#[cfg(test)]
mod tests {
    use crate::group::*;

    fn brute_derived(g: &GroupTable) -> Subset {
        let n = g.order();
        let mut comms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                comms.push(g.commutator(a, b));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        g.closure(&comms)
    }

    #[test]
    fn derived_matches_all_commutators() {
        for g in [
            build_named(NamedGroup::Symmetric(4)).unwrap(),
            build_named(NamedGroup::Dihedral(6)).unwrap(),
            build_named(NamedGroup::Alternating(5)).unwrap(),
            build_linear(LinearKind::Sl, 2, 3).unwrap(),
            build_extraspecial(2, 2, ExtraspecialForm::Plus).unwrap(),
        ] {
            assert_eq!(g.derived_subgroup(), brute_derived(&g), "{}", g.family());
        }
    }

    #[test]
    fn solvability() {
        assert!(build_named(NamedGroup::Symmetric(4)).unwrap().is_solvable());
        assert!(!build_named(NamedGroup::Alternating(5))
            .unwrap()
            .is_solvable());
        assert!(!build_linear(LinearKind::Sl, 2, 5).unwrap().is_solvable());
        assert!(build_extraspecial(3, 1, ExtraspecialForm::Plus)
            .unwrap()
            .is_solvable());
    }

    #[test]
    fn centers() {
        let psl = build_linear(LinearKind::Psl, 2, 7).unwrap();
        assert_eq!(psl.center().to_vec(), vec![psl.identity()]);
        let sl = build_linear(LinearKind::Sl, 2, 5).unwrap();
        assert_eq!(sl.center().count(), 2);
        for z in sl.center().iter() {
            match sl.element(z) {
                GroupElement::Matrix { entries, .. } => {
                    assert_eq!(entries[1], entries[2]);
                    assert!(entries[1].is_zero());
                    assert_eq!(entries[0], entries[3]);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        let es = build_extraspecial(3, 1, ExtraspecialForm::Plus).unwrap();
        assert_eq!(es.center().count(), 3);
        let es32 = build_extraspecial(2, 2, ExtraspecialForm::Plus).unwrap();
        assert_eq!(es32.center().count(), 2);
        assert_eq!(&es32.derived_subgroup(), es32.center());
    }

    #[test]
    fn centralizer_properties() {
        let g = build_linear(LinearKind::Pgl, 2, 5).unwrap();
        assert_eq!(g.centralizer(g.identity()).count(), g.order());
        for x in 0..g.order() {
            let c = g.centralizer(x);
            assert!(c.contains(x));
            assert!(g.center().is_subset(&c));
            assert!(g.is_subgroup(&c));
            assert_eq!(*c, g.centralizer_uncached(x));
        }
    }

    #[test]
    fn bicentralizers_are_abelian_hulls() {
        let g = build_linear(LinearKind::Psl, 2, 9).unwrap();
        for x in 0..g.order() {
            if g.is_central(x) {
                assert!(matches!(
                    g.bicentralizer(x),
                    Err(GroupError::CentralElement(_))
                ));
                continue;
            }
            let b = g.bicentralizer(x).unwrap();
            assert!(g.is_abelian(&b));
            assert!(b.contains(x));
            assert!(b.is_subset(&g.centralizer(x)));
            // brute force C(C(x))
            let c = g.centralizer(x).to_vec();
            assert_eq!(b, g.centralizer_of(&c));
        }
    }

    #[test]
    fn extraspecial_bicentralizer_is_line_times_center() {
        let g = build_extraspecial(3, 2, ExtraspecialForm::Plus).unwrap();
        for x in (0..g.order()).filter(|&x| !g.is_central(x)) {
            let b = g.bicentralizer(x).unwrap();
            assert_eq!(b.count(), 9);
            let GroupElement::Extraspecial { v: u, .. } = g.element(x) else {
                panic!()
            };
            for y in b.iter() {
                let GroupElement::Extraspecial { v, .. } = g.element(y) else {
                    panic!()
                };
                // v ∈ ⟨u⟩
                assert!((0..3).any(|k| v.iter().zip(&u).all(|(a, b)| *a == (k * b) % 3)));
            }
        }
    }

    #[test]
    fn centralizer_table_matches_direct_scan() {
        for g in [
            build_linear(LinearKind::Pgl, 2, 5).unwrap(),
            build_linear(LinearKind::Sl, 2, 3).unwrap(),
            build_extraspecial(3, 1, ExtraspecialForm::Minus).unwrap(),
        ] {
            let table = g.centralizer_table();
            for x in 0..g.order() {
                assert_eq!(*table[x], g.centralizer_uncached(x), "element {x}");
            }
        }
    }

    #[test]
    fn general_sylow_counts() {
        let s4 = build_named(NamedGroup::Symmetric(4)).unwrap();
        assert_eq!(s4.sylow_subgroup(2).unwrap().count(), 8);
        assert_eq!(s4.sylow_count(2).unwrap(), 3);
        assert_eq!(s4.sylow_count(3).unwrap(), 4);
        let a5 = build_named(NamedGroup::Alternating(5)).unwrap();
        assert_eq!(a5.sylow_count(2).unwrap(), 5);
        for p in [3, 5] {
            assert_eq!(
                a5.sylow_count(p).unwrap(),
                a5.sylow_count_cyclic(p).unwrap()
            );
        }
        assert!(a5.sylow_count(7).is_err());
        assert!(a5.sylow_count(4).is_err());
    }

    #[test]
    fn sylow_counts() {
        let psl = build_linear(LinearKind::Psl, 2, 7).unwrap();
        assert_eq!(psl.sylow_count_cyclic(7).unwrap(), 8);
        let a5 = build_named(NamedGroup::Alternating(5)).unwrap();
        assert_eq!(a5.sylow_count_cyclic(5).unwrap(), 6);
        assert!(matches!(
            a5.sylow_count_cyclic(2),
            Err(GroupError::SylowNotCyclic { p: 2 })
        ));
        assert!(a5.sylow_count_cyclic(7).is_err());
    }

    #[test]
    fn pgl7_centralizers_of_split_torus() {
        // a non-involution in a split torus D has C(a) = D of order q-1;
        // the involution of D has a dihedral centralizer of order 2(q-1)
        let g = build_linear(LinearKind::Pgl, 2, 7).unwrap();
        let d = (0..g.order())
            .find(|&x| g.element_order(x) == 6 && g.centralizer(x).count() == 6)
            .unwrap();
        let torus = g.centralizer(d);
        assert!(g.is_abelian(&torus));
        for a in torus.iter().filter(|&a| a != g.identity()) {
            let c = g.centralizer(a);
            if g.element_order(a) == 2 {
                assert_eq!(c.count(), 12);
                assert!(!g.is_abelian(&c));
                assert_eq!(g.derived_subgroup_of(&c).count(), 3);
            } else {
                assert_eq!(*c, *torus);
            }
        }
    }
}
