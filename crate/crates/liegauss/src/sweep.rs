//! Batch verification sweeps: every exact identity across all types up to a
//! rank cap, plus the numeric theta checks at fixed sample points.

use num_complex::Complex64;

use crate::lattices::{poisson_check, GroupForm, Lattice, QuotientGroup};
use crate::rootsys::{build_root_system, coxeter_identity, Family};
use crate::theta::{default_taus, ThetaParams};
use crate::{cyclo, gauss, heckerep, modrep, theta};

/// Sample-point configuration for the numeric checks.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    pub taus: Vec<Complex64>,
    pub seed: u64,
    pub tol: f64,
    pub eps: Vec<f64>,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { taus: default_taus(), seed: 42, tol: 1e-10, eps: vec![0.1, 0.05] }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: false, detail: detail.into() }
    }

    fn of(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed: ok, detail: detail.into() }
    }
}

fn all_types(max_rank: usize) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        out.push((Family::A, r));
    }
    for r in 2..=max_rank {
        out.push((Family::B, r));
        out.push((Family::C, r));
    }
    for r in 3..=max_rank {
        out.push((Family::D, r));
    }
    for r in 6..=8.min(max_rank) {
        out.push((Family::E, r));
    }
    if max_rank >= 4 {
        out.push((Family::F, 4));
    }
    if max_rank >= 2 {
        out.push((Family::G, 2));
    }
    out
}

fn simply_laced_types(max_rank: usize) -> Vec<(Family, usize)> {
    all_types(max_rank)
        .into_iter()
        .filter(|&(f, _)| matches!(f, Family::A | Family::D | Family::E))
        .collect()
}

/// The forms covered by the reciprocity/S-duality sweeps: every subgroup
/// lattice of A_r (r ≤ 11), D_r (r ≤ 10), and the E types.
pub fn reciprocity_forms(max_rank: usize) -> Vec<GroupForm> {
    let mut out = Vec::new();
    for r in 1..=max_rank.min(11) {
        let rs = build_root_system(Family::A, r).unwrap();
        out.extend(GroupForm::all_forms(&rs).unwrap());
    }
    for r in 3..=max_rank.min(10) {
        let rs = build_root_system(Family::D, r).unwrap();
        out.extend(GroupForm::all_forms(&rs).unwrap());
    }
    for r in 6..=8.min(max_rank) {
        let rs = build_root_system(Family::E, r).unwrap();
        out.extend(GroupForm::all_forms(&rs).unwrap());
    }
    out
}

pub fn non_simply_laced_forms(max_rank: usize) -> Vec<GroupForm> {
    let mut out = Vec::new();
    for r in 2..=max_rank.min(8) {
        for f in [Family::B, Family::C] {
            let rs = build_root_system(f, r).unwrap();
            out.extend(GroupForm::all_forms(&rs).unwrap());
        }
    }
    if max_rank >= 4 {
        out.extend(GroupForm::all_forms(&build_root_system(Family::F, 4).unwrap()).unwrap());
    }
    if max_rank >= 2 {
        out.extend(GroupForm::all_forms(&build_root_system(Family::G, 2).unwrap()).unwrap());
    }
    out
}

/// One work item of the sweep.
pub enum Item {
    RootSys(Family, usize),
    CenterTable(Family, usize),
    GaussIdentity(Family, usize),
    Reciprocity(GroupForm),
    ModularRelations(Family, usize),
    HeckeRelations(Family, usize),
    SDualityVector(GroupForm),
    HeckeVector(GroupForm),
    Milgram(Family, usize),
    Poisson(Family, usize),
    Supq(u64, u64),
    QuadRec(u64, u64),
    ThetaLaws(Family, usize, Complex64),
    ThetaSdual(GroupForm, Complex64),
    Landsberg(GroupForm),
    HatPhaseCross(Family, usize),
}

fn expected_center(f: Family, r: usize) -> Vec<u64> {
    match f {
        Family::A => vec![r as u64 + 1],
        Family::B | Family::C => vec![2],
        Family::D => {
            if r.is_multiple_of(2) {
                vec![2, 2]
            } else {
                vec![4]
            }
        }
        Family::E => match r {
            6 => vec![3],
            7 => vec![2],
            _ => vec![],
        },
        Family::F | Family::G => vec![],
    }
}

pub fn run_item(item: &Item, cfg: &NumericConfig) -> CheckResult {
    match item {
        Item::RootSys(f, r) => match build_root_system(*f, *r) {
            Ok(rs) => {
                let ok = coxeter_identity(&rs)
                    && rs.roots.len() as u64 == rs.rank as u64 * rs.h;
                CheckResult::of(
                    format!("rootsys {}{}", f, r),
                    ok,
                    format!("|roots|={} h={} ȟ={}", rs.roots.len(), rs.h, rs.h_check),
                )
            }
            Err(e) => CheckResult::fail(format!("rootsys {}{}", f, r), e.to_string()),
        },
        Item::CenterTable(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            let q = QuotientGroup::new(
                &Lattice::coweight_lattice(&rs),
                &Lattice::coroot_lattice(&rs),
            )
            .unwrap();
            let expect = expected_center(*f, *r);
            CheckResult::of(
                format!("center {}{}", f, r),
                q.invariant_factors == expect,
                format!("factors {:?} expected {:?}", q.invariant_factors, expect),
            )
        }
        Item::GaussIdentity(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            match gauss::verify_gauss_identity(&rs) {
                Ok(ok) => CheckResult::of(format!("gauss-identity {}{}", f, r), ok, ""),
                Err(e) => CheckResult::fail(format!("gauss-identity {}{}", f, r), e.to_string()),
            }
        }
        Item::Reciprocity(g) => match gauss::verify_reciprocity(g) {
            Ok(ok) => CheckResult::of(
                format!("reciprocity {} ({})", g.name, g.rs.type_name()),
                ok,
                "",
            ),
            Err(e) => CheckResult::fail(format!("reciprocity {}", g.name), e.to_string()),
        },
        Item::ModularRelations(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            match modrep::verify_modular_relations(&rs) {
                Ok(rep) => CheckResult::of(
                    format!("modular {}{}", f, r),
                    rep.all_pass(),
                    format!("{rep:?}"),
                ),
                Err(e) => CheckResult::fail(format!("modular {}{}", f, r), e.to_string()),
            }
        }
        Item::HeckeRelations(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            match heckerep::verify_hecke_relations(&rs) {
                Ok(rep) => CheckResult::of(
                    format!("hecke {}{}", f, r),
                    rep.all_pass(),
                    format!("{rep:?}"),
                ),
                Err(e) => CheckResult::fail(format!("hecke {}{}", f, r), e.to_string()),
            }
        }
        Item::SDualityVector(g) => match modrep::verify_s_duality(g) {
            Ok(ok) => CheckResult::of(format!("s-dual-vector {}", g.name), ok, ""),
            Err(e) => CheckResult::fail(format!("s-dual-vector {}", g.name), e.to_string()),
        },
        Item::HeckeVector(g) => match heckerep::hecke_group_vectors(g) {
            Ok(ok) => CheckResult::of(format!("hecke-vector {}", g.name), ok, ""),
            Err(e) => CheckResult::fail(format!("hecke-vector {}", g.name), e.to_string()),
        },
        Item::Milgram(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            match gauss::milgram(&Lattice::root_lattice(&rs)) {
                Ok(ok) => CheckResult::of(format!("milgram {}{}", f, r), ok, ""),
                Err(e) => CheckResult::fail(format!("milgram {}{}", f, r), e.to_string()),
            }
        }
        Item::Poisson(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            let q = QuotientGroup::new(
                &Lattice::coweight_lattice(&rs),
                &Lattice::root_lattice(&rs),
            )
            .unwrap();
            let fv: Vec<cyclo::CycScalar> = (0..q.order() as usize)
                .map(|i| cyclo::phase(&q.norm_frac(i).unwrap()))
                .collect();
            let mut ok = true;
            let mut n_sub = 0;
            for sub in q.all_subgroups() {
                n_sub += 1;
                if !poisson_check(&q, &sub, &fv).unwrap_or(false) {
                    ok = false;
                }
            }
            CheckResult::of(format!("poisson {}{}", f, r), ok, format!("{n_sub} subgroups"))
        }
        Item::Supq(p, q) => match gauss::verify_supq(*p, *q) {
            Ok(ok) => CheckResult::of(format!("supq ({p},{q})"), ok, ""),
            Err(e) => CheckResult::fail(format!("supq ({p},{q})"), e.to_string()),
        },
        Item::QuadRec(p, q) => match gauss::verify_quadratic_reciprocity(*p, *q) {
            Ok(ok) => CheckResult::of(format!("quad-rec ({p},{q})"), ok, ""),
            Err(e) => CheckResult::fail(format!("quad-rec ({p},{q})"), e.to_string()),
        },
        Item::ThetaLaws(f, r, tau) => {
            let rs = build_root_system(*f, *r).unwrap();
            let threshold = if rs.is_simply_laced() { 1e-8 } else { 1e-7 };
            let p = ThetaParams {
                z: theta::seeded_z(*r, cfg.seed),
                tau: *tau,
                delta: Complex64::new(0.1, 0.05),
                tol: cfg.tol,
            };
            match theta::verify_theta_modular(&rs, &p) {
                Ok(rep) => {
                    let res = rep.max_residual();
                    CheckResult::of(
                        format!("theta-laws {}{} tau={}", f, r, tau),
                        res < threshold,
                        format!("max residual {res:.3e} (< {threshold:e})"),
                    )
                }
                Err(e) => {
                    CheckResult::fail(format!("theta-laws {}{} tau={}", f, r, tau), e.to_string())
                }
            }
        }
        Item::ThetaSdual(g, tau) => {
            let p = ThetaParams {
                z: theta::seeded_z(g.rs.rank, cfg.seed),
                tau: *tau,
                delta: Complex64::ZERO,
                tol: cfg.tol,
            };
            match theta::verify_theta_sduality(g, &p) {
                Ok(rep) => {
                    let res = rep.max_residual();
                    CheckResult::of(
                        format!("theta-sdual {} tau={}", g.name, tau),
                        res < 1e-7,
                        format!("residual {res:.3e} (< 1e-7)"),
                    )
                }
                Err(e) => {
                    CheckResult::fail(format!("theta-sdual {} tau={}", g.name, tau), e.to_string())
                }
            }
        }
        Item::Landsberg(g) => {
            let exact = match gauss::gauss_sum(g) {
                Ok(v) => v.to_complex(),
                Err(e) => return CheckResult::fail(format!("landsberg {}", g.name), e.to_string()),
            };
            let mut residuals = Vec::new();
            for &eps in &cfg.eps {
                match theta::landsberg_limit(g, eps) {
                    Ok(v) => residuals.push((eps, (v - exact).norm())),
                    Err(e) => {
                        return CheckResult::fail(format!("landsberg {}", g.name), e.to_string())
                    }
                }
            }
            residuals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let within = residuals.iter().all(|&(_, r)| r < 1e-6);
            let decreasing = residuals.windows(2).all(|w| w[1].1 < w[0].1);
            CheckResult::of(
                format!("landsberg {}", g.name),
                within && decreasing,
                format!("residuals {residuals:?}"),
            )
        }
        Item::HatPhaseCross(f, r) => {
            let rs = build_root_system(*f, *r).unwrap();
            let p = ThetaParams {
                z: theta::seeded_z(*r, cfg.seed),
                tau: Complex64::new(0.3, 0.9),
                delta: Complex64::ZERO,
                tol: cfg.tol,
            };
            let result = (|| -> crate::Result<f64> {
                let mut worst = 0.0f64;
                if rs.is_simply_laced() {
                    let t = modrep::build_t(&rs)?;
                    for i in 0..t.dim {
                        let measured = theta::measured_t_phase(&rs, false, i, &p)?;
                        let exact = t.at(i, i).to_complex();
                        worst = worst.max((measured - exact).norm());
                    }
                } else {
                    let rep = heckerep::build_hecke_rep(&rs)?;
                    let dim_u = rep.u_sector.order() as usize;
                    for i in 0..dim_u {
                        let measured = theta::measured_t_phase(&rs, false, i, &p)?;
                        let exact = rep.t.at(i, i).to_complex();
                        worst = worst.max((measured - exact).norm());
                    }
                    for j in 0..rep.mu_sector.order() as usize {
                        let measured = theta::measured_t_phase(&rs, true, j, &p)?;
                        let exact = rep.t.at(dim_u + j, dim_u + j).to_complex();
                        worst = worst.max((measured - exact).norm());
                    }
                }
                Ok(worst)
            })();
            match result {
                Ok(worst) => CheckResult::of(
                    format!("hat-phase {}{}", f, r),
                    worst < 1e-8,
                    format!("max |measured - exact| = {worst:.3e}"),
                ),
                Err(e) => CheckResult::fail(format!("hat-phase {}{}", f, r), e.to_string()),
            }
        }
    }
}

fn odd_primes_below(n: u64) -> Vec<u64> {
    (3..n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// Assemble the full sweep for `sweep all --max-rank N`.
pub fn build_items(max_rank: usize, cfg: &NumericConfig) -> Vec<Item> {
    let mut items = Vec::new();
    for (f, r) in all_types(max_rank) {
        items.push(Item::RootSys(f, r));
        items.push(Item::CenterTable(f, r));
    }
    for (f, r) in simply_laced_types(max_rank) {
        items.push(Item::GaussIdentity(f, r));
        items.push(Item::ModularRelations(f, r));
        items.push(Item::Milgram(f, r));
    }
    for g in reciprocity_forms(max_rank) {
        items.push(Item::Reciprocity(g.clone()));
        items.push(Item::SDualityVector(g));
    }
    for r in 2..=max_rank.min(8) {
        items.push(Item::HeckeRelations(Family::B, r));
        items.push(Item::HeckeRelations(Family::C, r));
    }
    if max_rank >= 4 {
        items.push(Item::HeckeRelations(Family::F, 4));
    }
    if max_rank >= 2 {
        items.push(Item::HeckeRelations(Family::G, 2));
    }
    for g in non_simply_laced_forms(max_rank) {
        items.push(Item::HeckeVector(g));
    }
    for r in 1..=max_rank.min(7) {
        items.push(Item::Poisson(Family::A, r));
    }
    for (p, q) in [(2, 3), (3, 5), (3, 7), (5, 7)] {
        items.push(Item::Supq(p, q));
    }
    let primes = odd_primes_below(50);
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            items.push(Item::QuadRec(p, q));
        }
    }
    // Numeric checks.
    let mut theta_types: Vec<(Family, usize)> = simply_laced_types(max_rank.min(6));
    for (f, r) in [(Family::B, 2), (Family::B, 3), (Family::C, 3), (Family::F, 4), (Family::G, 2)]
    {
        if r <= max_rank {
            theta_types.push((f, r));
        }
    }
    for &(f, r) in &theta_types {
        for tau in &cfg.taus {
            items.push(Item::ThetaLaws(f, r, *tau));
        }
    }
    let mut sdual_forms: Vec<GroupForm> = Vec::new();
    for name in ["SU(3)", "SU(4)/Z2", "Spin(8)", "Sp(2)", "Sp(3)", "F4", "G2"] {
        if let Ok(g) = crate::lattices::form_from_name(name) {
            if g.rs.rank <= max_rank {
                sdual_forms.push(g);
            }
        }
    }
    for g in sdual_forms {
        for tau in &cfg.taus {
            items.push(Item::ThetaSdual(g.clone(), *tau));
        }
    }
    for (f, r) in simply_laced_types(max_rank.min(6)) {
        let rs = build_root_system(f, r).unwrap();
        for g in GroupForm::all_forms(&rs).unwrap() {
            items.push(Item::Landsberg(g));
        }
    }
    for (f, r) in [(Family::A, 2), (Family::D, 4), (Family::B, 2), (Family::G, 2)] {
        if r <= max_rank {
            items.push(Item::HatPhaseCross(f, r));
        }
    }
    items
}

/// Run items, optionally fanning out across worker threads. The result order
/// is the item order regardless of scheduling.
pub fn run_items(items: &[Item], cfg: &NumericConfig, jobs: usize) -> Vec<CheckResult> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(|it| run_item(it, cfg)).collect();
    }
    let n = items.len();
    let counter = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<CheckResult>>> =
        (0..n).map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(n) {
            scope.spawn(|| loop {
                let i = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let res = run_item(&items[i], cfg);
                *results[i].lock().unwrap() = Some(res);
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

/// Everything, at the given rank cap. Returns the per-check results.
pub fn sweep_all(max_rank: usize, cfg: &NumericConfig, jobs: usize) -> Vec<CheckResult> {
    let items = build_items(max_rank, cfg);
    run_items(&items, cfg, jobs)
}
