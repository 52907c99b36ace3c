//! The `opalg` command line. Each subcommand decodes its inputs, calls one
//! library operation and encodes the result.
//!
//! Exit codes: 0 on success, 1 for I/O, JSON or usage errors, 2 when a
//! mathematical precondition fails. Errors are printed to stdout as
//! `{"error":{…}}`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{AlgElem, BlockShape, Tolerances};
use crate::cpmaps::LinMapAB;
use crate::error::{Error, Result};
use crate::groups::{self, CrossedProduct, FiniteGroup, GroupFn};
use crate::hmod::{self, HModule};
use crate::induce::{self, Subgroup};
use crate::json::{self, At, Json};
use crate::linalg::Mat;
use crate::povm::Povm;
use crate::spectral::{self, RadiusMethod, ScalarFn};
use crate::states::{self, Representation, State};

#[derive(Debug, Parser)]
#[command(name = "opalg", version, about = "Finite-dimensional operator algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomised steps (Wedderburn splitting, sampled checks).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relative equality tolerance.
    #[arg(long, global = true, env = "OPALG_TOL_EQ")]
    pub tol_eq: Option<f64>,

    /// Eigenvalue slack for positivity tests.
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of an algebra element.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also report the spectral radius by repeated squaring.
        #[arg(long)]
        gelfand: bool,
    },
    /// Continuous functional calculus of a normal element.
    Calculus {
        /// sqrt | abs | exp | poly:c0,c1,...
        #[arg(long = "fn")]
        func: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// GNS representation of a state.
    Gns {
        /// Block shape, as `[n1,…]` or `{"shape":[…]}`.
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        state: PathBuf,
    },
    /// Minimal Stinespring dilation of a CP map.
    Stinespring {
        #[arg(long = "map")]
        map: PathBuf,
    },
    /// Naimark dilation of a POVM.
    Naimark {
        #[arg(long)]
        povm: PathBuf,
    },
    /// Fourier transform of a function on a finite abelian group.
    Fourier {
        #[arg(long)]
        group: PathBuf,
        #[arg(long = "fn")]
        func: PathBuf,
    },
    /// Simple-summand decomposition of the algebra generated by matrices.
    Decompose {
        #[arg(long, num_args = 1.., required = true)]
        mats: Vec<PathBuf>,
    },
    /// Crossed product of a group acting on a finite set.
    Crossed {
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        action: PathBuf,
    },
    /// Induce a representation of a subgroup to a system of imprimitivity.
    Induce {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Recover the inducing representation of a system of imprimitivity.
    Mackey {
        #[arg(long)]
        system: PathBuf,
    },
    /// Check the defining properties of an input file.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Rieffel-induce a representation through a Hilbert module.
    InduceModule {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Elem,
    State,
    Map,
    Povm,
    Group,
    Action,
    Module,
}

impl Cli {
    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(e) = self.tol_eq {
            tol.eps_eq = e;
        }
        if let Some(p) = self.tol_psd {
            tol.eps_psd = p;
        }
        tol
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code together with what should be printed on stdout.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let err = json!({"error": {"kind": "usage", "message": e.to_string()}});
                    (1, json::encode(&err) + "\n")
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> (i32, String) {
    let result = execute(cli).and_then(|v| {
        let text = json::encode(&v) + "\n";
        match &cli.out {
            Some(path) => {
                std::fs::write(path, &text)?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    });
    match result {
        Ok(text) => (0, text),
        Err(e) => {
            let code = if e.is_precondition() { 2 } else { 1 };
            (code, json::encode(&json::error_object(&e)) + "\n")
        }
    }
}

fn read<T: Json>(path: &Path) -> Result<T> {
    json::read(path)
}

pub fn execute(cli: &Cli) -> Result<Value> {
    let tol = cli.tolerances();
    match &cli.command {
        Command::Spectrum { input, gelfand } => {
            let a: AlgElem = read(input)?;
            let s = spectral::spectrum(&a, &tol)?;
            let mut out = json!({"eigenvalues": json::complex_list(&s.eigenvalues)});
            if *gelfand {
                let r = spectral::spectral_radius(&a, RadiusMethod::Gelfand, &tol)?;
                out["gelfand_radius"] = json::num(r);
            }
            Ok(out)
        }
        Command::Calculus { func, input } => {
            let f: ScalarFn = func.parse()?;
            let a: AlgElem = read(input)?;
            Ok(spectral::functional_calculus(|z| f.eval(z), &a, &tol)?.to_json())
        }
        Command::Gns { algebra, state } => {
            let s: State = read(state)?;
            if let Some(path) = algebra {
                let shape: BlockShape = read(path)?;
                if &shape != s.shape() {
                    return Err(Error::Invalid(format!(
                        "state lives on {} but the algebra is {shape}",
                        s.shape()
                    )));
                }
            }
            let g = states::gns(&s, &tol)?;
            Ok(json!({
                "dim": g.rep.dim(),
                "gram_rank": g.gram_rank,
                "cyclic": json::vector(&g.cyclic),
                "rep": g.rep.to_json(),
                "irreducible": g.rep.is_irreducible()?,
            }))
        }
        Command::Stinespring { map } => {
            let q: LinMapAB = read(map)?;
            let d = q.stinespring(&tol)?;
            Ok(json!({
                "dilation_dim": d.dilation_dim(),
                "block_multiplicities": d.block_multiplicities(),
                "rep": d.rep.to_json(),
                "w": d.w.to_json(),
                "unital": d.unital,
                "residual": json::num(d.residual),
            }))
        }
        Command::Naimark { povm } => {
            let p: Povm = read(povm)?;
            let n = p.naimark(&tol)?;
            Ok(json!({
                "dilation_dim": n.pvm.dim(),
                "pvm": n.pvm.to_json(),
                "w": n.w.to_json(),
                "residual": json::num(n.residual),
            }))
        }
        Command::Fourier { group, func } => {
            let g: FiniteGroup = read(group)?;
            let f: GroupFn = read(func)?;
            let fourier = groups::abelian_fourier(&g, &tol)?;
            Ok(json!({
                "transform": json::complex_list(&fourier.transform(&f)?),
                "exponents": fourier.exponents,
            }))
        }
        Command::Decompose { mats } => {
            let ms = mats.iter().map(|p| read::<Mat>(p)).collect::<Result<Vec<_>>>()?;
            let w = states::wedderburn(&ms, cli.seed)?;
            Ok(json!({
                "shape": w.shape.to_json(),
                "multiplicities": w.multiplicities,
                "basis_change": w.basis_change.to_json(),
                "block_residual": json::num(w.block_residual(&ms)),
            }))
        }
        Command::Crossed { group, action } => {
            let (g, a) = json::action_from_json(&json::read_value(action)?)?;
            if let Some(path) = group {
                let g2: FiniteGroup = read(path)?;
                if g2 != g {
                    return Err(Error::Invalid("the action is for a different group".into()));
                }
            }
            let cp = CrossedProduct::new(g.clone(), a.clone())?;
            let pair = cp.permutation_pair();
            let rep = cp.integrate(&pair)?;
            let mut out = json!({
                "dim": cp.dim(),
                "order": g.order(),
                "set_size": a.set_size(),
                "covariance_residual": json::num(pair.covariance_residual(&cp)),
                "representation_defect": json::num(rep.defect(&cp)?),
            });
            if a == groups::GAction::translation(&g) {
                let c = groups::cstar_gg(&g, &a)?;
                out["span_dim"] = json!(c.span_dim);
                out["surjective"] = json!(c.surjective);
            }
            Ok(out)
        }
        Command::Induce {
            group,
            subgroup,
            rep,
        } => {
            let g: FiniteGroup = read(group)?;
            let h = subgroup_from(&json::read_value(subgroup)?, &g)?;
            let chi = json::unitary_rep_for(&json::read_value(rep)?, &h.as_group(&g), &tol)?;
            let sys = induce::induce(&g, &h, &chi, &tol)?;
            Ok(json!({
                "group": g.to_json(),
                "subgroup": h.elements(),
                "dim": sys.space_dim,
                "inducing_dim": sys.inducing_dim,
                "rep": sys.rep.to_json(),
                "projections": json::list(&sys.mult_rep),
                "cosets": sys.cosets.cosets,
                "irreducible": sys.is_irreducible()?,
                "covariance_residual": json::num(sys.covariance_residual()),
            }))
        }
        Command::Mackey { system } => {
            let v = json::read_value(system)?;
            let at = At::root(&v);
            let g = FiniteGroup::from_json(at.field("group")?.value())
                .map_err(|e| at.field("group").map(|f| f.error(e.to_string())).unwrap_or(e))?;
            let h = subgroup_from(at.field("subgroup")?.value(), &g)?;
            let u = json::unitary_rep_for(at.field("rep")?.value(), &g, &tol)?;
            let proj_at = at.field("projections")?;
            let proj = proj_at.mats()?;
            let e = proj_at.build(Povm::unlabeled(u.dim(), proj))?;
            let m = induce::mackey_recover(&g, &h, &u, &e, &tol)?;
            Ok(json!({
                "chi": m.chi.to_json(),
                "intertwiner": m.intertwiner.to_json(),
                "residual": json::num(m.residual),
            }))
        }
        Command::Validate { kind, input } => validate(*kind, input, &tol, cli.seed),
        Command::InduceModule { module, rep } => {
            let e: HModule = read(module)?;
            let chi: Representation = read(rep)?;
            let induced = hmod::rieffel_induce(&e, &chi, &tol)?;
            let k = hmod::compacts(&e, &tol, cli.seed)?;
            let r = induced.compacts_rep(&k)?;
            Ok(json!({
                "dim": induced.dim,
                "compacts_shape": k.shape.to_json(),
                "rep": r.to_json(),
                "irreducible": r.is_irreducible()?,
            }))
        }
    }
}

/// `{"elements":[…]}` or a bare list of element indices.
fn subgroup_from(v: &Value, g: &FiniteGroup) -> Result<Subgroup> {
    let at = At::root(v);
    let (els, where_) = if v.is_object() {
        let f = at.field("elements")?;
        (f.usize_list()?, f.pointer())
    } else {
        (at.usize_list()?, "/".to_owned())
    };
    Subgroup::new(g, &els).map_err(|e| Error::Schema {
        pointer: where_,
        message: e.to_string(),
    })
}

fn validate(kind: Kind, input: &Path, tol: &Tolerances, seed: u64) -> Result<Value> {
    let v = json::read_value(input)?;
    Ok(match kind {
        Kind::Elem => {
            let a = AlgElem::from_json(&v)?;
            let sa = a.is_self_adjoint(tol);
            let positive = if sa {
                json!(spectral::positivity(&a, tol)?.is_positive)
            } else {
                Value::Null
            };
            json!({
                "op_norm": json::num(a.op_norm()),
                "self_adjoint": sa,
                "normality_defect": json::num(a.normality_defect()),
                "positive": positive,
            })
        }
        Kind::State => {
            let s = State::from_json(&v)?;
            let valid = s.is_valid(tol);
            let pure = if valid { json!(s.is_pure(tol)?) } else { Value::Null };
            json!({"valid": valid, "pure": pure})
        }
        Kind::Map => {
            let q = LinMapAB::from_json(&v)?;
            let star = q.star_defect();
            let mut out = json!({
                "unital": q.is_unital(tol),
                "star_defect": json::num(star),
            });
            match q.is_cp(tol) {
                Ok(r) => {
                    out["cp"] = json!(r.cp);
                    out["min_choi_eig"] = json::num(r.min_choi_eig);
                }
                Err(e) if e.is_precondition() => out["cp"] = json!(false),
                Err(e) => return Err(e),
            }
            out
        }
        Kind::Povm => {
            let p = Povm::from_json(&v)?;
            let c = p.validate(tol);
            json!({
                "valid": c.valid,
                "is_pvm": c.is_pvm,
                "normalization_defect": json::num(p.normalization_defect()),
            })
        }
        Kind::Group => {
            let g = FiniteGroup::from_json(&v)?;
            json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
                "conjugacy_classes": g.conjugacy_classes(),
            })
        }
        Kind::Action => {
            let (g, a) = json::action_from_json(&v)?;
            let orbits = orbits(&g, &a);
            json!({"order": g.order(), "set_size": a.set_size(), "orbits": orbits})
        }
        Kind::Module => {
            let e = HModule::from_json(&v)?;
            let report = e.validate(tol, 20, seed)?;
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "residual": json::num(c.residual), "passed": c.passed}))
                .collect();
            json!({"valid": report.valid(), "checks": checks})
        }
    })
}

fn orbits(g: &FiniteGroup, a: &groups::GAction) -> Vec<Vec<usize>> {
    let mut seen = vec![false; a.set_size()];
    let mut out = Vec::new();
    for q in 0..a.set_size() {
        if seen[q] {
            continue;
        }
        let mut orbit: Vec<usize> = (0..g.order()).map(|x| a.act(x, q)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &p in &orbit {
            seen[p] = true;
        }
        out.push(orbit);
    }
    out
}
