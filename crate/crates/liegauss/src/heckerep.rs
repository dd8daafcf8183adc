//! The unitary Hecke-group representation for a non-simply laced algebra on
//! the two-sector space `C[Λ*/Λ̌] ⊕ C[(ᴸΛ)*/(ᴸΛ)̌]`.
//!
//! Dual-side cosets are stored by their plain rational coordinates in
//! `Λ̌*/Λ`; the symbolic `√n` enters as the integer scale of the norm table
//! (`n·(μ|μ) mod 2`) while the mixed pairing `⟨μ,u⟩/√n` is the plain rational
//! pairing of stored coordinates. `T` is diagonal with sector-dependent
//! prefactors `e^{-iπ n ȟ' r / 12h}`; `S̃` is block anti-diagonal and swaps the
//! sectors.

use crate::cyclo::{phase, RadScalar};
use crate::lattices::{GroupForm, Lattice, QuotientGroup};
use crate::modrep::PhaseMatrix;
use crate::ratmat::{dot, frac, rat, rem_mod, Rat};
use crate::rootsys::{dual_root_system, RootSystem};
use crate::{Error, Result};

pub struct HeckeRep {
    pub s_tilde: PhaseMatrix,
    pub t: PhaseMatrix,
    /// `Λ*/Λ̌` (scale 1).
    pub u_sector: QuotientGroup,
    /// `Λ̌*/Λ` with norm scale `n`.
    pub mu_sector: QuotientGroup,
    pub n_g: u32,
}

impl HeckeRep {
    pub fn dim(&self) -> usize {
        (self.u_sector.order() + self.mu_sector.order()) as usize
    }
}

/// Build `S̃` and `T` for a non-simply laced type.
pub fn build_hecke_rep(rs: &RootSystem) -> Result<HeckeRep> {
    if rs.is_simply_laced() {
        return Err(Error::NotNonSimplyLaced(format!(
            "the Hecke representation for {}",
            rs.type_name()
        )));
    }
    let n = rs.n_g as u64;
    let u_sector =
        QuotientGroup::new(&Lattice::coweight_lattice(rs), &Lattice::coroot_lattice(rs))?;
    let mu_sector =
        QuotientGroup::with_scale(&Lattice::weight_lattice(rs), &Lattice::root_lattice(rs), n)?;
    // |Z(G~)| = |Z(ᴸG~)| is the prefactor symmetry the formulas assume.
    if u_sector.order() != mu_sector.order() {
        return Err(Error::Lattice(format!(
            "sector dimensions differ for {}: {} vs {}",
            rs.type_name(),
            u_sector.order(),
            mu_sector.order()
        )));
    }
    let dim_u = u_sector.order() as usize;
    let dim = 2 * dim_u;
    let dual = dual_root_system(rs);
    let r = rs.rank as i64;
    let h = rs.h as i64;

    // T prefactors: u-sector e^{-iπ/12·n·(ᴸȟ/h)·r}, μ-sector with ȟ.
    let pref_u = phase(&(frac(-(n as i64) * r, 12) * frac(dual.h_check as i64, h)));
    let pref_mu = phase(&(frac(-(n as i64) * r, 12) * frac(rs.h_check as i64, h)));

    let mut labels: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    labels.extend(u_sector.reps.iter().cloned());
    labels.extend(mu_sector.reps.iter().cloned());

    let mut t_err = None;
    let t = PhaseMatrix::from_fn(labels.clone(), |i, j| {
        if i != j {
            return RadScalar::zero();
        }
        let res = if i < dim_u {
            u_sector.norm_frac(i).map(|nf| RadScalar::from_cyc(pref_u.mul(&phase(&nf))))
        } else {
            mu_sector
                .norm_frac(i - dim_u)
                .map(|nf| RadScalar::from_cyc(pref_mu.mul(&phase(&nf))))
        };
        match res {
            Ok(v) => v,
            Err(e) => {
                t_err = Some(e);
                RadScalar::zero()
            }
        }
    });
    if let Some(e) = t_err {
        return Err(e);
    }

    // S̃ entries: |Z|^{-1/2}·e^{-2πi(μ₀|u)} on both off-diagonal blocks.
    let pref_s = RadScalar::inv_sqrt(u_sector.order());
    let cross_phase = |mu_idx: usize, u_idx: usize| -> RadScalar {
        let p = dot(&rs.gram, mu_sector.rep(mu_idx), u_sector.rep(u_idx));
        pref_s.mul(&RadScalar::from_cyc(phase(&(rat(-2) * rem_mod(&p, 1)))))
    };
    let s_tilde = PhaseMatrix::from_fn(labels, |i, j| {
        match (i < dim_u, j < dim_u) {
            // |u⟩ ↦ Σ_μ e^{...}|μ⟩: column u, rows μ
            (false, true) => cross_phase(i - dim_u, j),
            // |μ⟩ ↦ Σ_u e^{...}|u⟩: column μ, rows u
            (true, false) => cross_phase(j - dim_u, i),
            _ => RadScalar::zero(),
        }
    });

    Ok(HeckeRep { s_tilde, t, u_sector, mu_sector, n_g: rs.n_g })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HeckeReport {
    pub s_unitary: bool,
    pub t_unitary: bool,
    pub s4_is_identity: bool,
    pub st_2n_equals_s2: bool,
    pub s2_is_negation: bool,
    pub s2_is_identity: bool,
    pub block_structure: bool,
    pub aggregate_phase: bool,
    pub table_residual: bool,
}

impl HeckeReport {
    pub fn all_pass(&self) -> bool {
        self.s_unitary
            && self.t_unitary
            && self.s4_is_identity
            && self.st_2n_equals_s2
            && self.s2_is_negation
            && self.s2_is_identity
            && self.block_structure
            && self.aggregate_phase
            && self.table_residual
    }
}

fn negation_matrix_two_sector(rep: &HeckeRep) -> PhaseMatrix {
    let dim_u = rep.u_sector.order() as usize;
    let labels: Vec<Vec<Rat>> = rep.t.basis_labels.clone();
    PhaseMatrix::from_fn(labels, |i, j| {
        let hit = if i < dim_u && j < dim_u {
            i == rep.u_sector.neg(j)
        } else if i >= dim_u && j >= dim_u {
            i - dim_u == rep.mu_sector.neg(j - dim_u)
        } else {
            false
        };
        if hit {
            RadScalar::one()
        } else {
            RadScalar::zero()
        }
    })
}

/// Exact verification of the Hecke-group relations, including the
/// table decomposition of `(S̃T)^{2n}` into the aggregate phase
/// `e^{-iπn(n+1)r/12}` times per-sector scalars.
pub fn verify_hecke_relations(rs: &RootSystem) -> Result<HeckeReport> {
    let rep = build_hecke_rep(rs)?;
    let n = rs.n_g;
    let s = &rep.s_tilde;
    let t = &rep.t;
    let s2 = s.mul(s);
    let st = s.mul(t);
    let st_2n = st.pow(2 * n);
    let neg = negation_matrix_two_sector(&rep);

    // Block structure: T sector-diagonal, S̃ sector-anti-diagonal.
    let dim_u = rep.u_sector.order() as usize;
    let block_structure = {
        let mut ok = true;
        for i in 0..s.dim {
            for j in 0..s.dim {
                let same_sector = (i < dim_u) == (j < dim_u);
                if same_sector && !s.at(i, j).is_zero() {
                    ok = false;
                }
                if !same_sector && !t.at(i, j).is_zero() {
                    ok = false;
                }
                if i != j && !t.at(i, j).is_zero() {
                    ok = false;
                }
            }
        }
        ok
    };

    // (pref_u · pref_mu)^n = e^{-iπ·n(n+1)·r/12} via the Coxeter identity.
    let aggregate_phase = {
        let dual = dual_root_system(rs);
        let r = rs.rank as i64;
        let h = rs.h as i64;
        let pref_u = phase(&(frac(-(n as i64) * r, 12) * frac(dual.h_check as i64, h)));
        let pref_mu = phase(&(frac(-(n as i64) * r, 12) * frac(rs.h_check as i64, h)));
        let lhs = pref_u.mul(&pref_mu).pow(n as u64);
        let rhs = phase(&frac(-(n as i64) * (n as i64 + 1) * r, 12));
        lhs.eq_exact(&rhs)
    };

    // Table rows: with the prefactors stripped from T, (S̃T')^{2n} equals the
    // per-sector scalar e^{iπr/2} for B/C and the identity for F4 and G2.
    let table_residual = {
        let mut t_err = None;
        let t_stripped = PhaseMatrix::from_fn(t.basis_labels.clone(), |i, j| {
            if i != j {
                return RadScalar::zero();
            }
            let res = if i < dim_u {
                rep.u_sector.norm_frac(i)
            } else {
                rep.mu_sector.norm_frac(i - dim_u)
            };
            match res {
                Ok(nf) => RadScalar::from_cyc(phase(&nf)),
                Err(e) => {
                    t_err = Some(e);
                    RadScalar::zero()
                }
            }
        });
        if let Some(e) = t_err {
            return Err(e);
        }
        let got = s.mul(&t_stripped).pow(2 * n);
        let expected_scalar = match rs.family {
            crate::rootsys::Family::B | crate::rootsys::Family::C => {
                phase(&frac(rs.rank as i64, 2))
            }
            _ => crate::cyclo::CycScalar::one(),
        };
        let expect = PhaseMatrix::identity(t.basis_labels.clone())
            .scale(&RadScalar::from_cyc(expected_scalar));
        got.eq_exact(&expect)
    };

    Ok(HeckeReport {
        s_unitary: s.is_unitary(),
        t_unitary: t.is_unitary(),
        s4_is_identity: s2.mul(&s2).is_identity(),
        st_2n_equals_s2: st_2n.eq_exact(&s2),
        s2_is_negation: s2.eq_exact(&neg),
        // discriminant groups here are 2-torsion or trivial
        s2_is_identity: s2.is_identity(),
        block_structure,
        aggregate_phase,
        table_residual,
    })
}

/// `|G⟩` on the u-sector and `|ᴸG⟩` on the μ-sector, with
/// `S̃|G⟩ = |ᴸG⟩` and `S̃|ᴸG⟩ = |G⟩`, exactly.
pub fn hecke_group_vectors(g: &GroupForm) -> Result<bool> {
    if g.is_simply_laced() {
        return Err(Error::NotNonSimplyLaced(format!("Hecke group vectors for {}", g.name)));
    }
    let rep = build_hecke_rep(&g.rs)?;
    let dim_u = rep.u_sector.order() as usize;
    let dim = rep.dim();

    // |G⟩: classes of ℓ/Λ̌ inside Λ*/Λ̌.
    let members_u = rep.u_sector.subgroup_indices(&g.ell);
    let pref_u = RadScalar::inv_sqrt(members_u.len() as u64);
    let mut vg = vec![RadScalar::zero(); dim];
    for i in &members_u {
        vg[*i] = pref_u.clone();
    }
    // |ᴸG⟩: classes of ᴸℓ/(ᴸΛ)̌ = (stored) ℓ*/Λ inside Λ̌*/Λ.
    let ell_star = g.ell.dual()?;
    let members_mu = rep.mu_sector.subgroup_indices(&ell_star);
    let pref_mu = RadScalar::inv_sqrt(members_mu.len() as u64);
    let mut vl = vec![RadScalar::zero(); dim];
    for i in &members_mu {
        vl[dim_u + *i] = pref_mu.clone();
    }

    let sg = rep.s_tilde.mul_vec(&vg);
    let sl = rep.s_tilde.mul_vec(&vl);
    let eq = |a: &[RadScalar], b: &[RadScalar]| a.iter().zip(b).all(|(x, y)| x.eq_exact(y));
    // norms
    let n1 = crate::modrep::vector_norm2(&vg);
    let n2 = crate::modrep::vector_norm2(&vl);
    Ok(eq(&sg, &vl)
        && eq(&sl, &vg)
        && n1.eq_exact(&RadScalar::one())
        && n2.eq_exact(&RadScalar::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::form_from_name;
    use crate::rootsys::{build_root_system, Family};

    fn rs(f: Family, r: usize) -> RootSystem {
        build_root_system(f, r).unwrap()
    }

    #[test]
    fn f4_t_phase() {
        // u-sector prefactor: e^{-iπ/12·2·(9/12)·4} = e^{-iπ/2}; |Z| = 1 so the
        // diagonal entry is the prefactor itself.
        let rep = build_hecke_rep(&rs(Family::F, 4)).unwrap();
        assert_eq!(rep.dim(), 2);
        let expect = RadScalar::from_cyc(phase(&frac(-1, 2)));
        assert!(rep.t.at(0, 0).eq_exact(&expect));
        // ȟ = ᴸȟ = 9 for F4: both sector phases equal.
        assert!(rep.t.at(1, 1).eq_exact(&expect));
    }

    #[test]
    fn b2_sector_phases_equal() {
        // B2 = C2 self-dual: ȟ = ᴸȟ = 3.
        let rep = build_hecke_rep(&rs(Family::B, 2)).unwrap();
        let dim_u = rep.u_sector.order() as usize;
        // prefactors multiply different norms, so compare the scalar parts by
        // dividing out the norm phases: check pref equality via the zero classes.
        let zu = rep.u_sector.zero_index();
        let zm = rep.mu_sector.zero_index();
        assert!(rep.t.at(zu, zu).eq_exact(rep.t.at(dim_u + zm, dim_u + zm)));
    }

    #[test]
    fn sector_dimensions_square() {
        for (f, r) in [(Family::B, 3), (Family::C, 5), (Family::F, 4), (Family::G, 2)] {
            let rep = build_hecke_rep(&rs(f, r)).unwrap();
            assert_eq!(rep.u_sector.order(), rep.mu_sector.order(), "{f}{r}");
        }
    }

    #[test]
    fn rejects_simply_laced() {
        assert!(matches!(
            build_hecke_rep(&rs(Family::A, 2)),
            Err(Error::NotNonSimplyLaced(_))
        ));
    }

    #[test]
    fn hecke_relations_table() {
        // F4: (S̃T)⁴ = e^{-iπ·2·3·4/12} = 1; G2: (S̃T)⁶ = e^{-iπ·3·4·2/12} = 1;
        // B4: (S̃T)⁴ = 1 via e^{-iπr/2}·e^{iπr/2} block scalars.
        for (f, r) in [(Family::F, 4), (Family::G, 2), (Family::B, 4), (Family::C, 3)] {
            let rep = verify_hecke_relations(&rs(f, r)).unwrap();
            assert!(rep.all_pass(), "{f}{r}: {rep:?}");
        }
    }

    #[test]
    fn group_vector_exchange() {
        // Spin(2r+1) / Sp(r) pair and the self-dual F4.
        for name in ["Spin(7)", "Sp(3)", "F4", "G2", "SO(5)"] {
            let g = form_from_name(name).unwrap();
            assert!(hecke_group_vectors(&g).unwrap(), "{name}");
        }
    }
}
