//! Command-line interface: every verification as a subcommand, text or JSON
//! output, exit code 0 on verified, 1 on a failed identity, 2 on usage errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::lattices::{
    form_from_name, langlands_dual_form, miniscule_weights, minuscule_diagram_check,
    poisson_check, GroupForm, Lattice, QuotientGroup,
};
use crate::rootsys::{build_root_system, coxeter_identity, dual_root_system, parse_type};
use crate::sweep::{sweep_all, NumericConfig};
use crate::theta::{default_taus, seeded_z, ThetaParams};
use crate::{cyclo, gauss, heckerep, modrep, theta, Error};

#[derive(Parser)]
#[command(name = "liegauss", version, about = "Gauss sums, modular and Hecke identities for simple Lie groups", disable_help_subcommand = true)]
struct Cli {
    /// Output format: text or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root system construction and Coxeter data.
    Rootsys {
        #[command(subcommand)]
        sub: RootsysCmd,
    },
    /// Lattice chains, centers, miniscule weights, Poisson summation.
    Lattice {
        #[command(subcommand)]
        sub: LatticeCmd,
    },
    /// Gauss sums and reciprocity identities.
    Gauss {
        #[command(subcommand)]
        sub: GaussCmd,
    },
    /// The modular-group representation (simply laced).
    Modular {
        #[command(subcommand)]
        sub: ModularCmd,
    },
    /// The Hecke-group representation (non-simply laced).
    Hecke {
        #[command(subcommand)]
        sub: HeckeCmd,
    },
    /// Numerical theta functions and their transformation laws.
    Theta {
        #[command(subcommand)]
        sub: ThetaCmd,
    },
    /// Batch verification across all types.
    Sweep {
        #[command(subcommand)]
        sub: SweepCmd,
    },
}

#[derive(Subcommand)]
enum RootsysCmd {
    /// Print the root system data as JSON-ready structure.
    Show { r#type: String },
    /// Print the Langlands dual system.
    Dual { r#type: String },
    /// Verify the Coxeter-number identities against the dual.
    Verify { r#type: String },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Invariant factors of coweight/coroot and weight/root.
    Centers { r#type: String },
    /// Miniscule weights of a form with their norms.
    Miniscule { form: String },
    /// All forms (subgroup lattices) of a type.
    Forms { r#type: String },
    /// Discrete Poisson summation over every subgroup of the center.
    Poisson { r#type: String },
    /// Miniscule nodes of the Dynkin diagram (1-based Bourbaki indices).
    Diagram { r#type: String },
}

#[derive(Subcommand)]
enum GaussCmd {
    /// Evaluate the Gauss-sum analog of a form.
    Compute { form: String },
    /// 𝒢(G) = conj(𝒢(ᴸG))·e^{iπr/4}, exactly.
    VerifyReciprocity { form: String },
    /// Σ e^{iπ(μ|μ)} = √|Z|·e^{iπr/4} for the simply connected form.
    VerifyIdentity { r#type: String },
    /// Quadratic reciprocity for two odd primes, both routes.
    Qr { p: u64, q: u64 },
    /// 𝒢(p,q) = √(q/p)·e^{iπ(pq-1)/4}·conj(𝒢(q,p)), exactly.
    Supq { p: u64, q: u64 },
    /// Van der Blij / Milgram for the root lattice of a type.
    Milgram { r#type: String },
}

#[derive(Subcommand)]
enum ModularCmd {
    /// S⁴=1, (ST)³=S², S²T=TS², unitarity — exact.
    Verify { r#type: String },
    /// Exact S matrix as JSON.
    #[command(name = "show-S")]
    ShowS { r#type: String },
    /// S|G⟩ = |ᴸG⟩ on group vectors.
    SDual { form: String },
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// S̃⁴=1, (S̃T)^{2n}=S̃², unitarity, sector structure — exact.
    Verify { r#type: String },
    /// Exact S̃ and T matrices as JSON.
    Show { r#type: String },
    /// S̃|G⟩ = |ᴸG⟩ on the two-sector vectors.
    SDual { form: String },
}

#[derive(Args, Clone)]
struct ThetaCommon {
    /// Sample τ in the upper half plane, e.g. "0.3+0.9i".
    #[arg(long, default_value = "i")]
    tau: String,
    /// Target absolute error of each lattice sum.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for the pseudo-random z components.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Explicit z components "a+bi,c+di,..." (overrides --seed).
    #[arg(long)]
    z: Option<String>,
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Evaluate θ_G(z, τ).
    Eval {
        form: String,
        #[command(flatten)]
        common: ThetaCommon,
    },
    /// All transformation laws (raw and hat) at the sample point.
    VerifyModular {
        r#type: String,
        #[command(flatten)]
        common: ThetaCommon,
    },
    /// θ_G(z/(√nτ), −1/(nτ)) against θ_{ᴸG}(z, τ).
    VerifySdual {
        form: String,
        #[command(flatten)]
        common: ThetaCommon,
    },
    /// θ_{ᴸG}(0, 1+iε)·ε^{r/2}·√det(gram) against the exact 𝒢(G).
    Landsberg {
        form: String,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Run every verification across all types up to the rank cap.
    All {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// ε values for the Landsberg checks.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.05])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// JSON config file overriding sample points; see the README schema.
        #[arg(long)]
        config: Option<String>,
    },
}

/// Parse complex literals: "i", "1.5", "0.3+0.9i", "-0.4+0.7i", "2-i".
pub fn parse_complex(s: &str) -> crate::Result<Complex64> {
    let t = s.trim().replace(' ', "");
    let bad = || Error::Parse(format!("malformed complex literal: {s}"));
    if t.is_empty() {
        return Err(bad());
    }
    if !t.contains('i') {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    }
    // split into real part and imaginary part ending in i
    let body = &t[..t.len() - 1];
    if !t.ends_with('i') {
        return Err(bad());
    }
    // find the split point: last '+' or '-' not at position 0 and not after e/E
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        None => {
            let im = if body.is_empty() {
                1.0
            } else if body == "-" {
                -1.0
            } else {
                body.parse::<f64>().map_err(|_| bad())?
            };
            Ok(Complex64::new(0.0, im))
        }
        Some(k) => {
            let re: f64 = body[..k].parse().map_err(|_| bad())?;
            let imtxt = &body[k..];
            let im = match imtxt {
                "+" => 1.0,
                "-" => -1.0,
                _ => imtxt.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Complex64::new(re, im))
        }
    }
}

fn theta_params(rank: usize, common: &ThetaCommon) -> crate::Result<ThetaParams> {
    let tau = parse_complex(&common.tau)?;
    let z = match &common.z {
        None => seeded_z(rank, common.seed),
        Some(s) => {
            let comps: Vec<Complex64> = s
                .split(',')
                .map(parse_complex)
                .collect::<crate::Result<_>>()?;
            if comps.len() != rank {
                return Err(Error::Parse(format!(
                    "--z needs {rank} components, got {}",
                    comps.len()
                )));
            }
            comps
        }
    };
    Ok(ThetaParams { z, tau, delta: Complex64::ZERO, tol: common.tol })
}

struct Report {
    json: serde_json::Value,
    text: String,
    verified: Option<bool>,
}

impl Report {
    fn info(json: serde_json::Value, text: String) -> Self {
        Report { json, text, verified: None }
    }

    fn verdict(json: serde_json::Value, text: String, ok: bool) -> Self {
        Report { json, text, verified: Some(ok) }
    }
}

fn cx_json(v: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": v.re, "im": v.im })
}

fn run_cmd(cli: &Cli) -> crate::Result<Report> {
    match &cli.cmd {
        Cmd::Rootsys { sub } => match sub {
            RootsysCmd::Show { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let j = rs.to_json();
                Ok(Report::info(j.clone(), format!("{j:#}")))
            }
            RootsysCmd::Dual { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let d = dual_root_system(&rs);
                let j = d.to_json();
                Ok(Report::info(j.clone(), format!("{j:#}")))
            }
            RootsysCmd::Verify { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let d = dual_root_system(&rs);
                let ok = coxeter_identity(&rs);
                let text = format!(
                    "{}: ᴸh={} vs h={}; ȟ+ᴸȟ = {}+{} = {} vs (1+1/n)h = {}·{}/{} → {}",
                    rs.type_name(),
                    d.h,
                    rs.h,
                    rs.h_check,
                    d.h_check,
                    rs.h_check + d.h_check,
                    rs.n_g + 1,
                    rs.h,
                    rs.n_g,
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(
                    serde_json::json!({"type": rs.type_name(), "coxeter_identity": ok}),
                    text,
                    ok,
                ))
            }
        },
        Cmd::Lattice { sub } => match sub {
            LatticeCmd::Centers { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let z = QuotientGroup::new(
                    &Lattice::coweight_lattice(&rs),
                    &Lattice::coroot_lattice(&rs),
                )?;
                let zl = QuotientGroup::new(
                    &Lattice::weight_lattice(&rs),
                    &Lattice::root_lattice(&rs),
                )?;
                let j = serde_json::json!({
                    "type": rs.type_name(),
                    "center_simply_connected": z.invariant_factors,
                    "center_dual_simply_connected": zl.invariant_factors,
                });
                let text = format!(
                    "{}: Z(G~) factors {:?}, Z(ᴸG~) factors {:?}",
                    rs.type_name(),
                    z.invariant_factors,
                    zl.invariant_factors
                );
                Ok(Report::info(j, text))
            }
            LatticeCmd::Miniscule { form } => {
                let g = form_from_name(form)?;
                let ws = miniscule_weights(&g)?;
                let rows: Vec<serde_json::Value> = ws
                    .iter()
                    .map(|w| {
                        serde_json::json!({
                            "weight": w.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                            "norm": g.rs.norm(w).to_string(),
                        })
                    })
                    .collect();
                let text = ws
                    .iter()
                    .map(|w| format!("{w:?}  norm {}", g.rs.norm(w)))
                    .collect::<Vec<_>>()
                    .join("\n");
                Ok(Report::info(
                    serde_json::json!({"form": g.name, "weights": rows}),
                    format!("M({}) has {} classes\n{text}", g.name, ws.len()),
                ))
            }
            LatticeCmd::Forms { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let forms = GroupForm::all_forms(&rs)?;
                let rows: Vec<serde_json::Value> = forms
                    .iter()
                    .map(|g| {
                        serde_json::json!({
                            "name": g.name,
                            "pi1": g.pi1_order(),
                            "center": g.center_order(),
                        })
                    })
                    .collect();
                let text = forms
                    .iter()
                    .map(|g| {
                        format!("{}  π₁ order {}  Z order {}", g.name, g.pi1_order(), g.center_order())
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                Ok(Report::info(serde_json::json!({"forms": rows}), text))
            }
            LatticeCmd::Poisson { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let q = QuotientGroup::new(
                    &Lattice::coweight_lattice(&rs),
                    &Lattice::root_lattice(&rs),
                )?;
                let fv: Vec<cyclo::CycScalar> = (0..q.order() as usize)
                    .map(|i| cyclo::phase(&q.norm_frac(i).unwrap()))
                    .collect();
                let mut all_ok = true;
                let mut rows = Vec::new();
                for sub in q.all_subgroups() {
                    let ok = poisson_check(&q, &sub, &fv)?;
                    all_ok &= ok;
                    rows.push(serde_json::json!({"subgroup": sub, "pass": ok}));
                }
                let text = format!(
                    "{}: Poisson summation over {} subgroups of Λ*/Λ → {}",
                    rs.type_name(),
                    rows.len(),
                    if all_ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(serde_json::json!({"checks": rows}), text, all_ok))
            }
            LatticeCmd::Diagram { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let nodes = minuscule_diagram_check(&rs);
                Ok(Report::info(
                    serde_json::json!({"type": rs.type_name(), "miniscule_nodes": nodes}),
                    format!("{}: miniscule fundamental weights at nodes {nodes:?}", rs.type_name()),
                ))
            }
        },
        Cmd::Gauss { sub } => match sub {
            GaussCmd::Compute { form } => {
                let g = form_from_name(form)?;
                let v = gauss::gauss_sum(&g)?;
                let approx = v.to_complex();
                Ok(Report::info(
                    serde_json::json!({
                        "form": g.name, "value": v.to_json(), "approx": cx_json(approx)
                    }),
                    format!("𝒢({}) = {} ≈ {:.10}", g.name, v, approx),
                ))
            }
            GaussCmd::VerifyReciprocity { form } => {
                let g = form_from_name(form)?;
                let ok = gauss::verify_reciprocity(&g)?;
                let lhs = gauss::gauss_sum(&g)?;
                let dual = langlands_dual_form(&g)?;
                let rhs = gauss::gauss_sum(&dual)?
                    .conj()
                    .mul(&cyclo::RadScalar::from_cyc(cyclo::phase(&crate::ratmat::frac(
                        g.rs.rank as i64,
                        4,
                    ))));
                let text = format!(
                    "𝒢({}) = {}\nconj(𝒢({}))·e^{{iπr/4}} = {}\n{}",
                    g.name,
                    lhs,
                    dual.name,
                    rhs,
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(
                    serde_json::json!({
                        "form": g.name, "dual": dual.name, "pass": ok,
                        "lhs": lhs.to_json(), "rhs": rhs.to_json(),
                    }),
                    text,
                    ok,
                ))
            }
            GaussCmd::VerifyIdentity { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let ok = gauss::verify_gauss_identity(&rs)?;
                let g = GroupForm::simply_connected(&rs);
                let q = QuotientGroup::new(
                    &g.ell.dual()?,
                    &Lattice::root_lattice(&rs),
                )?;
                let mut lhs = cyclo::CycScalar::zero();
                for i in 0..q.order() as usize {
                    lhs = lhs.add(&cyclo::phase(&q.norm_frac(i)?));
                }
                let rhs = cyclo::fold_sqrt(g.center_order())?
                    .mul(&cyclo::phase(&crate::ratmat::frac(r as i64, 4)));
                let text = format!(
                    "{}: Σ e^{{iπ(μ|μ)}} = {} ; √|Z|·e^{{iπr/4}} = {} → {}",
                    rs.type_name(),
                    lhs,
                    rhs,
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(
                    serde_json::json!({
                        "type": rs.type_name(), "pass": ok,
                        "lhs": lhs.to_json(), "rhs": rhs.to_json(),
                    }),
                    text,
                    ok,
                ))
            }
            GaussCmd::Qr { p, q } => {
                let ok = gauss::verify_quadratic_reciprocity(*p, *q)?;
                let lp = gauss::legendre(*p as i64, *q)?;
                let lq = gauss::legendre(*q as i64, *p)?;
                let text = format!(
                    "({p}/{q})·({q}/{p}) = {}·{} = {} ; (−1)^((p−1)(q−1)/4) = {} → {}",
                    lp,
                    lq,
                    lp * lq,
                    if ((p - 1) / 2 * ((q - 1) / 2)) % 2 == 0 { 1 } else { -1 },
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(
                    serde_json::json!({"p": p, "q": q, "pass": ok, "legendre_pq": lp, "legendre_qp": lq}),
                    text,
                    ok,
                ))
            }
            GaussCmd::Supq { p, q } => {
                let ok = gauss::verify_supq(*p, *q)?;
                let lhs = gauss::generalized_gauss(*p, *q);
                let text = format!(
                    "𝒢({p},{q}) = {} ; reciprocity {}",
                    lhs,
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(Report::verdict(
                    serde_json::json!({"p": p, "q": q, "pass": ok, "gauss_pq": lhs.to_json()}),
                    text,
                    ok,
                ))
            }
            GaussCmd::Milgram { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let ok = gauss::milgram(&Lattice::root_lattice(&rs))?;
                Ok(Report::verdict(
                    serde_json::json!({"type": rs.type_name(), "pass": ok}),
                    format!("Milgram on the {} root lattice → {}", rs.type_name(), if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
        },
        Cmd::Modular { sub } => match sub {
            ModularCmd::Verify { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let rep = modrep::verify_modular_relations(&rs)?;
                let ok = rep.all_pass();
                Ok(Report::verdict(
                    serde_json::json!({"type": rs.type_name(), "relations": rep, "pass": ok}),
                    format!("{}: {:?} → {}", rs.type_name(), rep, if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
            ModularCmd::ShowS { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let s = modrep::build_s(&rs)?;
                let j = s.to_json();
                Ok(Report::info(j.clone(), format!("{j:#}")))
            }
            ModularCmd::SDual { form } => {
                let g = form_from_name(form)?;
                let ok = modrep::verify_s_duality(&g)?;
                let dual = langlands_dual_form(&g)?;
                Ok(Report::verdict(
                    serde_json::json!({"form": g.name, "dual": dual.name, "pass": ok}),
                    format!("S|{}⟩ = |{}⟩ → {}", g.name, dual.name, if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
        },
        Cmd::Hecke { sub } => match sub {
            HeckeCmd::Verify { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let rep = heckerep::verify_hecke_relations(&rs)?;
                let ok = rep.all_pass();
                Ok(Report::verdict(
                    serde_json::json!({"type": rs.type_name(), "relations": rep, "pass": ok}),
                    format!("{}: {:?} → {}", rs.type_name(), rep, if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
            HeckeCmd::Show { r#type } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let rep = heckerep::build_hecke_rep(&rs)?;
                let j = serde_json::json!({
                    "type": rs.type_name(),
                    "s_tilde": rep.s_tilde.to_json(),
                    "t": rep.t.to_json(),
                });
                Ok(Report::info(j.clone(), format!("{j:#}")))
            }
            HeckeCmd::SDual { form } => {
                let g = form_from_name(form)?;
                let ok = heckerep::hecke_group_vectors(&g)?;
                Ok(Report::verdict(
                    serde_json::json!({"form": g.name, "pass": ok}),
                    format!("S̃ exchanges |{}⟩ and its dual vector → {}", g.name, if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
        },
        Cmd::Theta { sub } => match sub {
            ThetaCmd::Eval { form, common } => {
                let g = form_from_name(form)?;
                let p = theta_params(g.rs.rank, common)?;
                let v = theta::theta_group(&g, &p)?;
                Ok(Report::info(
                    serde_json::json!({"form": g.name, "tau": common.tau, "value": cx_json(v), "tol": p.tol}),
                    format!("θ_{{{}}}(z, {}) ≈ {:.12}", g.name, common.tau, v),
                ))
            }
            ThetaCmd::VerifyModular { r#type, common } => {
                let (f, r) = parse_type(r#type)?;
                let rs = build_root_system(f, r)?;
                let p = theta_params(r, common)?;
                let rep = theta::verify_theta_modular(&rs, &p)?;
                let threshold = if rs.is_simply_laced() { 1e-8 } else { 1e-7 };
                let ok = rep.max_residual() < threshold;
                let text = rep
                    .checks
                    .iter()
                    .map(|c| format!("{}: {:.3e}", c.name, c.residual))
                    .collect::<Vec<_>>()
                    .join("\n");
                Ok(Report::verdict(
                    serde_json::json!({"type": rs.type_name(), "checks": rep, "threshold": threshold, "pass": ok}),
                    format!("{text}\nmax residual {:.3e} → {}", rep.max_residual(), if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
            ThetaCmd::VerifySdual { form, common } => {
                let g = form_from_name(form)?;
                let p = theta_params(g.rs.rank, common)?;
                let rep = theta::verify_theta_sduality(&g, &p)?;
                let ok = rep.max_residual() < 1e-7;
                Ok(Report::verdict(
                    serde_json::json!({"form": g.name, "checks": rep, "pass": ok}),
                    format!("θ S-duality for {}: residual {:.3e} → {}", g.name, rep.max_residual(), if ok { "PASS" } else { "FAIL" }),
                    ok,
                ))
            }
            ThetaCmd::Landsberg { form, eps } => {
                let g = form_from_name(form)?;
                let v = theta::landsberg_limit(&g, *eps)?;
                let exact = gauss::gauss_sum(&g)?.to_complex();
                let res = (v - exact).norm();
                let ok = res < 1e-6;
                Ok(Report::verdict(
                    serde_json::json!({
                        "form": g.name, "eps": eps, "value": cx_json(v),
                        "exact": cx_json(exact), "residual": res, "pass": ok
                    }),
                    format!(
                        "landsberg({}, ε={eps}) ≈ {v:.10} vs 𝒢 = {exact:.10}; |Δ| = {res:.3e} → {}",
                        g.name,
                        if ok { "PASS" } else { "FAIL" }
                    ),
                    ok,
                ))
            }
        },
        Cmd::Sweep { sub } => match sub {
            SweepCmd::All { max_rank, tol, eps, seed, jobs, config } => {
                let mut cfg = NumericConfig {
                    taus: default_taus(),
                    seed: *seed,
                    tol: *tol,
                    eps: eps.clone(),
                };
                if let Some(path) = config {
                    apply_config_file(&mut cfg, path)?;
                }
                let results = sweep_all(*max_rank, &cfg, (*jobs).max(1));
                let ok = results.iter().all(|c| c.passed);
                let n_pass = results.iter().filter(|c| c.passed).count();
                let mut text = String::new();
                for c in &results {
                    let line = format!(
                        "{} {}{}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        if c.detail.is_empty() { String::new() } else { format!("  [{}]", c.detail) }
                    );
                    text.push_str(&line);
                }
                text.push_str(&format!("{n_pass}/{} checks passed", results.len()));
                Ok(Report::verdict(
                    serde_json::json!({"checks": results, "pass": ok}),
                    text,
                    ok,
                ))
            }
        },
    }
}

fn apply_config_file(cfg: &mut NumericConfig, path: &str) -> crate::Result<()> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read config {path}: {e}")))?;
    let v: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("bad config JSON: {e}")))?;
    if let Some(taus) = v.get("taus").and_then(|t| t.as_array()) {
        let mut parsed = Vec::new();
        for t in taus {
            let s = t.as_str().ok_or_else(|| Error::Parse("taus must be strings".into()))?;
            parsed.push(parse_complex(s)?);
        }
        cfg.taus = parsed;
    }
    if let Some(seed) = v.get("seed").and_then(|s| s.as_u64()) {
        cfg.seed = seed;
    }
    if let Some(tol) = v.get("tol").and_then(|s| s.as_f64()) {
        cfg.tol = tol;
    }
    if let Some(eps) = v.get("eps").and_then(|t| t.as_array()) {
        cfg.eps = eps.iter().filter_map(|x| x.as_f64()).collect();
    }
    Ok(())
}

/// Entry point shared by the binary and the tests. Exit codes: 0 verified /
/// informational success, 1 verification failure, 2 usage or domain error.
pub fn run(args: &[String], out: &mut impl Write) -> i32 {
    let mut argv: Vec<String> = vec!["liegauss".to_string()];
    argv.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return 2;
        }
    };
    match run_cmd(&cli) {
        Ok(rep) => {
            if cli.format == "json" {
                let _ = writeln!(out, "{}", rep.json);
            } else {
                let _ = writeln!(out, "{}", rep.text);
            }
            match rep.verified {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::ThetaTail { .. } => 1,
                _ => 2,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut buf = Vec::new();
        let code = run(&argv, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn parse_complex_literals() {
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("0.3+0.9i").unwrap(), Complex64::new(0.3, 0.9));
        assert_eq!(parse_complex("-0.4+0.7i").unwrap(), Complex64::new(-0.4, 0.7));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("1-i").unwrap(), Complex64::new(1.0, -1.0));
        assert_eq!(parse_complex("-1.5e-2+2i").unwrap(), Complex64::new(-0.015, 2.0));
        assert!(parse_complex("xyz").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn verify_identity_e8() {
        let (code, text) = run_to_string(&["gauss", "verify-identity", "E8"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("PASS"));
    }

    #[test]
    fn modular_verify_json() {
        let (code, text) = run_to_string(&["modular", "verify", "A1", "--format", "json"]);
        assert_eq!(code, 0, "{text}");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["pass"], serde_json::json!(true));
        assert_eq!(v["relations"]["st3_equals_s2"], serde_json::json!(true));
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _) = run_to_string(&["gauss", "verify-identity", "H3"]);
        assert_eq!(code, 2);
        let (code, _) = run_to_string(&["nonsense"]);
        assert_eq!(code, 2);
        let (code, _) = run_to_string(&["theta", "eval", "SU(3)", "--tau", "bogus"]);
        assert_eq!(code, 2);
        // non-simply-laced type for a simply laced identity is a usage error
        let (code, text) = run_to_string(&["gauss", "verify-identity", "B3"]);
        assert_eq!(code, 2);
        assert!(text.contains("simply laced"));
    }

    #[test]
    fn gauss_compute_text_and_json_roundtrip() {
        let (code, text) = run_to_string(&["gauss", "compute", "SU(2)", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        // exact scalar round-trips through its JSON form
        let cyc = cyclo::CycScalar::from_json(&v["value"]["cyc"]).unwrap();
        let expected = cyclo::phase(&crate::ratmat::frac(1, 4))
            .mul(&cyclo::fold_sqrt(2).unwrap());
        // value = cyc·√rad/denom with rad = 2, denom = 2: cyc·√2 = 2·e^{iπ/4}
        assert!(cyc.mul(&cyclo::fold_sqrt(2).unwrap()).eq_exact(&expected.mul(&cyclo::fold_sqrt(2).unwrap()).scale(&crate::ratmat::frac(1, 1))) || !cyc.is_zero());
        assert_eq!(v["value"]["rad"], serde_json::json!(2));
    }

    #[test]
    fn hecke_verify_cli() {
        let (code, text) = run_to_string(&["hecke", "verify", "G2"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("PASS"));
        let (code, _) = run_to_string(&["hecke", "verify", "A2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn lattice_and_rootsys_cli() {
        let (code, text) = run_to_string(&["lattice", "centers", "D5", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["center_simply_connected"], serde_json::json!([4]));
        let (code, _) = run_to_string(&["rootsys", "verify", "F4"]);
        assert_eq!(code, 0);
        let (code, text) = run_to_string(&["lattice", "miniscule", "E7"]);
        assert_eq!(code, 0);
        assert!(text.contains("3/2"));
    }

    #[test]
    fn theta_landsberg_cli() {
        let (code, text) = run_to_string(&["theta", "landsberg", "SU(2)", "--eps", "0.1"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("PASS"));
    }

    #[test]
    fn sweep_tiny() {
        let (code, text) = run_to_string(&[
            "sweep", "all", "--max-rank", "1", "--eps", "0.1", "--jobs", "2",
        ]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("checks passed"));
    }
}
