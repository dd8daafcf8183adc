//! Simple root systems with exact rational Gram data.
//!
//! Vectors live in the simple-root basis throughout (Bourbaki numbering). The
//! Gram matrix is normalised so long roots have squared length 2; short roots
//! then have squared length `2/n` with `n` the squared-length ratio. Ambient
//! orthonormal realisations are never materialised, keeping every inner
//! product rational.

use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

use crate::ratmat::{dot, frac, rat, Rat, QMat};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(&self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Parse strings like `"A3"`, `"E8"`, `"b12"`.
pub fn parse_type(s: &str) -> Result<(Family, usize)> {
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
    let rank: usize =
        chars.as_str().trim_start_matches('_').parse().map_err(|_| Error::InvalidType(s.to_string()))?;
    Ok((fam, rank))
}

/// A simple root system with its normalised inner product and Coxeter data.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// `cartan[i][j] = 2(α_i|α_j)/(α_j|α_j)`.
    pub cartan: Vec<Vec<i64>>,
    /// `(α_i|α_j)`, long roots normalised to squared length 2.
    pub gram: QMat,
    /// All roots in simple-root coordinates, sorted lexicographically.
    pub roots: Vec<Vec<i64>>,
    /// Per-root tag, parallel to `roots`.
    pub long_mask: Vec<bool>,
    /// Ratio of long to short squared lengths (1 for simply laced).
    pub n_g: u32,
    pub h: u64,
    pub h_check: u64,
    pub h_long: u64,
    pub h_short: u64,
    /// Columns `ω_i` of the dual basis to the simple coroots.
    pub fundamental_weights: QMat,
    pub rho: Vec<Rat>,
    pub rho_long: Vec<Rat>,
    pub rho_short: Vec<Rat>,
    /// Highest root.
    pub theta_highest: Vec<i64>,
}

fn chain_cartan(rank: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
        if i + 1 < rank {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    c
}

fn cartan_and_lengths(family: Family, rank: usize) -> Result<(Vec<Vec<i64>>, Vec<bool>, u32)> {
    let bad = || Error::InvalidType(format!("{}{}", family.letter(), rank));
    match family {
        Family::A => {
            if rank < 1 {
                return Err(bad());
            }
            Ok((chain_cartan(rank), vec![true; rank], 1))
        }
        Family::B => {
            if rank < 2 {
                return Err(bad());
            }
            let mut c = chain_cartan(rank);
            c[rank - 2][rank - 1] = -2;
            let mut long = vec![true; rank];
            long[rank - 1] = false;
            Ok((c, long, 2))
        }
        Family::C => {
            if rank < 2 {
                return Err(bad());
            }
            let mut c = chain_cartan(rank);
            c[rank - 1][rank - 2] = -2;
            let mut long = vec![false; rank];
            long[rank - 1] = true;
            Ok((c, long, 2))
        }
        Family::D => {
            if rank < 3 {
                return Err(bad());
            }
            let mut c = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                c[i][i] = 2;
            }
            for i in 0..rank.saturating_sub(2) {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
            c[rank - 3][rank - 1] = -1;
            c[rank - 1][rank - 3] = -1;
            Ok((c, vec![true; rank], 1))
        }
        Family::E => {
            if !(6..=8).contains(&rank) {
                return Err(bad());
            }
            // Bourbaki: chain 1-3-4-5-...-r with node 2 attached to node 4.
            let mut c = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                c[i][i] = 2;
            }
            let mut edges = vec![(1usize, 3usize), (3, 4), (2, 4), (4, 5), (5, 6)];
            if rank >= 7 {
                edges.push((6, 7));
            }
            if rank == 8 {
                edges.push((7, 8));
            }
            for (a, b) in edges {
                c[a - 1][b - 1] = -1;
                c[b - 1][a - 1] = -1;
            }
            Ok((c, vec![true; rank], 1))
        }
        Family::F => {
            if rank != 4 {
                return Err(bad());
            }
            let mut c = chain_cartan(4);
            c[1][2] = -2;
            Ok((c, vec![true, true, false, false], 2))
        }
        Family::G => {
            if rank != 2 {
                return Err(bad());
            }
            Ok((vec![vec![2, -1], vec![-3, 2]], vec![false, true], 3))
        }
    }
}

/// Construct the root system by Weyl-reflection closure from the simple roots.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let (cartan, long_simple, n_g) = cartan_and_lengths(family, rank)?;

    // d_j = (α_j|α_j)/2 after the global normalisation.
    let d: Vec<Rat> =
        long_simple.iter().map(|&l| if l { rat(1) } else { frac(1, n_g as i64) }).collect();
    let gram = QMat::from_fn(rank, rank, |i, j| rat(cartan[i][j]) * &d[j]);
    assert!(gram.is_symmetric(), "Gram symmetrisation failed for {family}{rank}");

    // Reflection closure. s_i(β) = β - ⟨β, α̌_i⟩ α_i with ⟨β, α̌_i⟩ = Σ_j β_j cartan[j][i].
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        set.insert(e);
    }
    loop {
        let mut fresh: Vec<Vec<i64>> = Vec::new();
        for root in set.iter() {
            for i in 0..rank {
                let pairing: i64 = (0..rank).map(|j| root[j] * cartan[j][i]).sum();
                let mut refl = root.clone();
                refl[i] -= pairing;
                if !set.contains(&refl) {
                    fresh.push(refl);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }
    let roots: Vec<Vec<i64>> = set.into_iter().collect();

    let norm_of = |v: &[i64]| -> Rat {
        let vr: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
        dot(&gram, &vr, &vr)
    };
    let two = rat(2);
    let long_mask: Vec<bool> = roots.iter().map(|r| norm_of(r) == two).collect();

    // Positive roots have all coordinates of one sign.
    let positive: Vec<&Vec<i64>> = roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).collect();
    assert_eq!(
        positive.len() * 2,
        roots.len(),
        "roots must split into positive and negative halves"
    );

    let half_sum = |pred: &dyn Fn(usize) -> bool| -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); rank];
        for (idx, r) in roots.iter().enumerate() {
            if r.iter().all(|&x| x >= 0) && pred(idx) {
                for (a, &x) in acc.iter_mut().zip(r.iter()) {
                    *a += frac(x, 2);
                }
            }
        }
        acc
    };
    let rho = half_sum(&|_| true);
    let rho_long = half_sum(&|i| long_mask[i]);
    let rho_short = half_sum(&|i| !long_mask[i]);

    // Highest root: the unique dominant long root.
    let is_dominant = |v: &[i64]| -> bool {
        (0..rank).all(|i| (0..rank).map(|j| v[j] * cartan[j][i]).sum::<i64>() >= 0)
    };
    let dominant_long: Vec<&Vec<i64>> = roots
        .iter()
        .enumerate()
        .filter(|(i, r)| long_mask[*i] && is_dominant(r))
        .map(|(_, r)| r)
        .collect();
    assert_eq!(dominant_long.len(), 1, "expected a unique dominant long root");
    let theta_highest = dominant_long[0].clone();

    // Coxeter data. h = 1 + height(θ); ȟ = 1 + (ρ|θ) since θ̌ = θ for long θ.
    let h = 1 + theta_highest.iter().sum::<i64>() as u64;
    let pair_with_theta = |v: &[Rat]| -> Rat {
        let tr: Vec<Rat> = theta_highest.iter().map(|&x| rat(x)).collect();
        dot(&gram, v, &tr)
    };
    let as_u64 = |x: &Rat, what: &str| -> u64 {
        assert!(x.denom().to_i64() == Some(1) && !x.is_negative(), "{what} must be a non-negative integer, got {x}");
        x.numer().to_u64().unwrap()
    };
    let h_check = 1 + as_u64(&pair_with_theta(&rho), "(ρ|θ)");
    let h_long = 1 + as_u64(&pair_with_theta(&rho_long), "(ρ_long|θ)");
    let h_short = as_u64(&(pair_with_theta(&rho_short) * rat(n_g as i64)), "n(ρ_short|θ)");

    assert_eq!(roots.len() as u64, rank as u64 * h, "|Δ| = r·h failed for {family}{rank}");
    assert_eq!(h, h_long + h_short);
    assert_eq!(h_check as i64 * n_g as i64, (h_long * n_g as u64 + h_short) as i64);
    let n_long = long_mask.iter().filter(|&&l| l).count() as u64;
    assert_eq!(n_long, rank as u64 * h_long, "|Δ_long| = r·h_long");
    assert_eq!(roots.len() as u64 - n_long, rank as u64 * h_short, "|Δ_short| = r·h_short");

    // Fundamental weights: (ω_i|α_j) = δ_ij d_j, so W = G⁻¹·diag(d).
    let ginv = gram.inverse().ok_or_else(|| Error::Lattice("singular Gram matrix".into()))?;
    let fundamental_weights = QMat::from_fn(rank, rank, |i, j| ginv.at(i, j) * &d[j]);
    // ρ = Σ ω_i.
    for i in 0..rank {
        let mut s = Rat::zero();
        for j in 0..rank {
            s += fundamental_weights.at(i, j);
        }
        assert_eq!(s, rho[i], "ρ = Σω_i failed at coordinate {i}");
    }

    Ok(RootSystem {
        family,
        rank,
        cartan,
        gram,
        roots,
        long_mask,
        n_g,
        h,
        h_check,
        h_long,
        h_short,
        fundamental_weights,
        rho,
        rho_long,
        rho_short,
        theta_highest,
    })
}

impl RootSystem {
    pub fn type_name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn is_simply_laced(&self) -> bool {
        self.n_g == 1
    }

    pub fn norm(&self, v: &[Rat]) -> Rat {
        dot(&self.gram, v, v)
    }

    pub fn pairing(&self, x: &[Rat], y: &[Rat]) -> Rat {
        dot(&self.gram, x, y)
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.binary_search_by(|r| r.as_slice().cmp(root)).ok()
    }

    /// `α̌ = 2α/(α|α)` in the identification by the inner product.
    pub fn coroot(&self, root: &[i64]) -> Result<Vec<Rat>> {
        let idx = self
            .root_index(root)
            .ok_or_else(|| Error::Domain(format!("{root:?} is not a root of {}", self.type_name())))?;
        let scale = if self.long_mask[idx] { rat(1) } else { rat(self.n_g as i64) };
        Ok(root.iter().map(|&x| rat(x) * &scale).collect())
    }

    /// `⟨λ, α̌⟩ = 2(λ|α)/(α|α)` for a root α given by index.
    pub fn pairing_with_coroot(&self, lambda: &[Rat], root_idx: usize) -> Rat {
        let root: Vec<Rat> = self.roots[root_idx].iter().map(|&x| rat(x)).collect();
        let num = rat(2) * dot(&self.gram, lambda, &root);
        let rr = dot(&self.gram, &root, &root);
        num / rr
    }

    /// Family of the Langlands dual algebra: swaps B and C, fixes the rest.
    pub fn dual_family(&self) -> Family {
        match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        }
    }

    /// Node relabelling `σ` with `β_i = (1/√n) α̌_{σ(i)}` mapping the dualised
    /// simple system onto the Bourbaki ordering of the dual type.
    pub fn dual_node_permutation(&self) -> Vec<usize> {
        match self.family {
            Family::F => (0..self.rank).rev().collect(),
            Family::G => vec![1, 0],
            _ => (0..self.rank).collect(),
        }
    }

    pub fn simple_root_norm(&self, i: usize) -> Rat {
        self.gram.at(i, i).clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gram: Vec<Vec<String>> = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.gram.at(i, j).to_string()).collect())
            .collect();
        serde_json::json!({
            "type": self.type_name(),
            "family": self.family.letter().to_string(),
            "rank": self.rank,
            "cartan": self.cartan,
            "gram": gram,
            "num_roots": self.roots.len(),
            "n": self.n_g,
            "coxeter": self.h,
            "dual_coxeter": self.h_check,
            "h_long": self.h_long,
            "h_short": self.h_short,
            "highest_root": self.theta_highest,
        })
    }
}

/// The root system of the Langlands dual algebra, `(1/√n)Δ̌`, rebuilt in its
/// own Bourbaki coordinates.
pub fn dual_root_system(rs: &RootSystem) -> RootSystem {
    build_root_system(rs.dual_family(), rs.rank).expect("dual of a valid type is valid")
}

/// Both Coxeter-number identities between a system and its dual:
/// `ᴸh = h` and `ȟ + ᴸ ȟ = (1 + 1/n) h`.
pub fn coxeter_identity(rs: &RootSystem) -> bool {
    let dual = dual_root_system(rs);
    let n = rs.n_g as u64;
    rs.h == dual.h && n * (rs.h_check + dual.h_check) == (n + 1) * rs.h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, r: usize) -> RootSystem {
        build_root_system(f, r).unwrap()
    }

    #[test]
    fn coxeter_table() {
        // (family, rank, h, ȟ)
        let expect = [
            (Family::A, 5, 6, 6),
            (Family::B, 3, 6, 5),
            (Family::C, 3, 6, 4),
            (Family::D, 4, 6, 6),
            (Family::E, 6, 12, 12),
            (Family::E, 7, 18, 18),
            (Family::E, 8, 30, 30),
            (Family::F, 4, 12, 9),
            (Family::G, 2, 6, 4),
        ];
        for (f, r, h, hc) in expect {
            let s = rs(f, r);
            assert_eq!((s.h, s.h_check), (h, hc), "{f}{r}");
        }
    }

    #[test]
    fn a1_roots() {
        let s = rs(Family::A, 1);
        assert_eq!(s.roots, vec![vec![-1], vec![1]]);
        assert_eq!(s.h, 2);
        assert_eq!(s.roots.len(), 2);
    }

    #[test]
    fn f4_invariants() {
        let s = rs(Family::F, 4);
        assert_eq!(s.h, 12);
        assert_eq!(s.h_check, 9);
        assert_eq!(s.n_g, 2);
        assert_eq!(s.roots.len(), 48);
        assert_eq!((s.h_long, s.h_short), (6, 6));
    }

    #[test]
    fn coroots_b2() {
        let s = rs(Family::B, 2);
        // long root α1 = (1,0): α̌ = α
        assert_eq!(s.coroot(&[1, 0]).unwrap(), vec![rat(1), rat(0)]);
        // short root α2 = (0,1), norm 1: α̌ = 2α
        assert_eq!(s.simple_root_norm(1), rat(1));
        assert_eq!(s.coroot(&[0, 1]).unwrap(), vec![rat(0), rat(2)]);
        assert!(s.coroot(&[1, 5]).is_err());
    }

    #[test]
    fn coroots_simply_laced_identity() {
        let s = rs(Family::A, 3);
        for r in &s.roots {
            let c = s.coroot(r).unwrap();
            let plain: Vec<Rat> = r.iter().map(|&x| rat(x)).collect();
            assert_eq!(c, plain);
        }
    }

    #[test]
    fn duality_swaps_b_and_c() {
        let b3 = rs(Family::B, 3);
        let d = dual_root_system(&b3);
        assert_eq!(d.type_name(), "C3");
        let e6 = rs(Family::E, 6);
        assert_eq!(dual_root_system(&e6).type_name(), "E6");
        let g2 = rs(Family::G, 2);
        let dg = dual_root_system(&g2);
        assert_eq!((dg.h_long, dg.h_short), (g2.h_short, g2.h_long));
    }

    #[test]
    fn coxeter_identity_examples() {
        // B3: 5 + 4 = (3/2)·6
        assert!(coxeter_identity(&rs(Family::B, 3)));
        assert!(coxeter_identity(&rs(Family::F, 4)));
        assert!(coxeter_identity(&rs(Family::A, 5)));
        for r in 2..=8 {
            assert!(coxeter_identity(&rs(Family::B, r)));
            assert!(coxeter_identity(&rs(Family::C, r)));
        }
        assert!(coxeter_identity(&rs(Family::G, 2)));
    }

    #[test]
    fn dual_gram_matches_scaled_coroot_gram() {
        // Gram of the dual system equals (1/n)·(α̌_{σ(i)}|α̌_{σ(j)}).
        for (f, r) in [(Family::B, 4), (Family::C, 5), (Family::F, 4), (Family::G, 2), (Family::A, 4)] {
            let s = rs(f, r);
            let d = dual_root_system(&s);
            let sigma = s.dual_node_permutation();
            let n = rat(s.n_g as i64);
            for i in 0..s.rank {
                for j in 0..s.rank {
                    let ci = {
                        let mut e = vec![0i64; s.rank];
                        e[sigma[i]] = 1;
                        s.coroot(&e).unwrap()
                    };
                    let cj = {
                        let mut e = vec![0i64; s.rank];
                        e[sigma[j]] = 1;
                        s.coroot(&e).unwrap()
                    };
                    let direct = s.pairing(&ci, &cj) / &n;
                    assert_eq!(&direct, d.gram.at(i, j), "{f}{r} entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn double_dual_cartan_up_to_reordering() {
        for (f, r) in [(Family::B, 5), (Family::C, 4), (Family::F, 4), (Family::G, 2), (Family::D, 5)] {
            let s = rs(f, r);
            let dd = dual_root_system(&dual_root_system(&s));
            assert_eq!(s.cartan, dd.cartan, "{f}{r}");
        }
    }

    #[test]
    fn standard_cartan_matrices() {
        assert_eq!(rs(Family::G, 2).cartan, vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(
            rs(Family::F, 4).cartan,
            vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -2, 0],
                vec![0, -1, 2, -1],
                vec![0, 0, -1, 2]
            ]
        );
        assert_eq!(
            rs(Family::B, 3).cartan,
            vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]
        );
        assert_eq!(
            rs(Family::C, 3).cartan,
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]]
        );
        // Cartan entries are 2·gram[i][j]/gram[j][j].
        for (f, r) in [(Family::E, 7), (Family::B, 6), (Family::G, 2)] {
            let s = rs(f, r);
            for i in 0..s.rank {
                for j in 0..s.rank {
                    let expect = rat(2) * s.gram.at(i, j) / s.gram.at(j, j);
                    assert_eq!(rat(s.cartan[i][j]), expect);
                }
            }
        }
    }

    #[test]
    fn closure_terminates_up_to_rank_12() {
        for r in 1..=12 {
            let s = rs(Family::A, r);
            assert_eq!(s.roots.len() as u64, r as u64 * s.h);
        }
        for r in 2..=12 {
            for f in [Family::B, Family::C] {
                let s = rs(f, r);
                assert_eq!(s.roots.len() as u64, r as u64 * s.h, "{f}{r}");
            }
        }
        for r in 3..=12 {
            let s = rs(Family::D, r);
            assert_eq!(s.roots.len() as u64, r as u64 * s.h);
        }
        for r in 6..=8 {
            let s = rs(Family::E, r);
            assert_eq!(s.roots.len() as u64, r as u64 * s.h);
        }
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(build_root_system(Family::E, 9).is_err());
        assert!(build_root_system(Family::F, 3).is_err());
        assert!(build_root_system(Family::G, 3).is_err());
        assert!(build_root_system(Family::B, 1).is_err());
        assert!(build_root_system(Family::D, 2).is_err());
        assert!(build_root_system(Family::A, 0).is_err());
    }

    #[test]
    fn canonical_json_golden() {
        let s = rs(Family::B, 2);
        let got = serde_json::to_string(&s.to_json()).unwrap();
        let expect = r#"{"cartan":[[2,-2],[-1,2]],"coxeter":4,"dual_coxeter":3,"family":"B","gram":[["2","-1"],["-1","1"]],"h_long":2,"h_short":2,"highest_root":[1,2],"n":2,"num_roots":8,"rank":2,"type":"B2"}"#;
        assert_eq!(got, expect);
    }

    #[test]
    fn parse_type_strings() {
        assert_eq!(parse_type("E8").unwrap(), (Family::E, 8));
        assert_eq!(parse_type("b12").unwrap(), (Family::B, 12));
        assert!(parse_type("H3").is_err());
        assert!(parse_type("Ax").is_err());
    }
}
