//! The `compute` side of the CLI: build a series, law, class, or table
//! and print its canonical JSON. Commands are thin wrappers over the core
//! crate; all validation lives there.

use crate::common::{build_law, parse_i64_list, parse_line, parse_tau, print_json, reject};
use clap::Args;
use fgl_core::cellular::{CellularRing, LineClass};
use fgl_core::error::{AlgebraError, Result};
use fgl_core::ktheory::{
    additive_companion, character_of_k_class, mult_character, todd_factor, KRing,
    VirtualSplitBundle,
};
use fgl_core::ring::{BaseKind, RingSpec};
use fgl_core::series::MultiSeries;
use fgl_core::twist::twist_fgl;

#[derive(Args)]
pub struct LawOpts {
    /// additive | multiplicative | universal
    #[arg(long, default_value = "universal")]
    pub law: String,
    /// int | rat | lazard:M
    #[arg(long)]
    pub ring: Option<String>,
    /// Truncation degree for all series arithmetic.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
}

impl LawOpts {
    fn build(&self) -> Result<fgl_core::fgl::FormalGroupLaw> {
        build_law(&self.law, self.ring.as_deref(), self.degree)
    }
}

#[derive(Args)]
pub struct OutOpts {
    /// Emit compact JSON (the default; accepted for symmetry).
    #[arg(long)]
    pub json: bool,
    /// Indent the JSON output (formatting carries no stability guarantee).
    #[arg(long)]
    pub pretty: bool,
}

#[derive(clap::Subcommand)]
pub enum ComputeCmd {
    /// The universal law over a graded coefficient ring.
    UniversalFgl {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        /// Generator bound of the coefficient ring (defaults to the degree).
        #[arg(long)]
        bound: Option<u32>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The formal inverse series i(x) with F(x, i(x)) = 0.
    Inverse {
        #[command(flatten)]
        law: LawOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The n-fold formal sum [n](x).
    NSeries {
        #[command(flatten)]
        law: LawOpts,
        /// Multiplicity, may be negative.
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The formal linear combination F^{n_1,...,n_r}(x_1,...,x_r).
    Lincomb {
        #[command(flatten)]
        law: LawOpts,
        /// Comma-separated multiplicities, e.g. `2,-1,3`.
        #[arg(long, allow_hyphen_values = true)]
        mults: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The support-indexed decomposition of a formal linear combination.
    Zeta {
        #[command(flatten)]
        law: LawOpts,
        /// Comma-separated multiplicities, e.g. `2,-1`.
        #[arg(long, allow_hyphen_values = true)]
        mults: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The law conjugated by a twist sequence.
    TwistFgl {
        #[command(flatten)]
        law: LawOpts,
        /// exp-log | identity | comma list of rationals starting with 1.
        #[arg(long, default_value = "exp-log")]
        tau: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The Todd factor of a twist and its reciprocal unit series.
    Todd {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        /// exp-log | identity | comma list of rationals starting with 1.
        #[arg(long, default_value = "exp-log")]
        tau: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The Euler class of a line bundle on a product of projective spaces.
    Euler {
        #[command(flatten)]
        law: LawOpts,
        /// Base dimensions, e.g. `3,2` for P^3 x P^2.
        #[arg(long)]
        dims: String,
        /// Picard coordinates of the line bundle, e.g. `1,-2`.
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Chern classes of a split bundle given by its line summands.
    Chern {
        #[command(flatten)]
        law: LawOpts,
        #[arg(long)]
        dims: String,
        /// Semicolon-separated line summands, e.g. `1,0;0,2;-1,1`.
        #[arg(long, allow_hyphen_values = true)]
        lines: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Pushforward of the unit along a rank-two projective bundle stage.
    Push {
        #[command(flatten)]
        law: LawOpts,
        #[arg(long)]
        dims: String,
        /// The stage's two line summands, e.g. `1,0;0,0`.
        #[arg(long, allow_hyphen_values = true)]
        stage: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The tower class of the given height, pushed down to a point.
    Tower {
        #[command(flatten)]
        law: LawOpts,
        /// Tower height.
        #[arg(long)]
        i: u32,
        #[command(flatten)]
        out: OutOpts,
    },
    /// The multiplicative character of a line bundle's K-class.
    ChM {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[arg(long)]
        dims: String,
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Both sides of the pushforward comparison for P(L + O).
    Grr {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[arg(long)]
        dims: String,
        /// Picard coordinates of L.
        #[arg(long, allow_hyphen_values = true)]
        line: String,
        #[command(flatten)]
        out: OutOpts,
    },
}

fn parse_lines(spec: &str) -> Result<Vec<LineClass>> {
    spec.split(';')
        .map(|part| parse_line(part.trim()))
        .collect()
}

fn base_ring(opts: &LawOpts, dims: &str) -> Result<CellularRing> {
    let law = opts.build()?;
    let dims = parse_i64_list(dims)?;
    CellularRing::make_base(law, &dims)
}

fn run_inner(cmd: &ComputeCmd) -> Result<(serde_json::Value, bool)> {
    Ok(match cmd {
        ComputeCmd::UniversalFgl { degree, bound, out } => {
            let law = fgl_core::fgl::FormalGroupLaw::universal(
                BaseKind::Rationals,
                bound.unwrap_or(*degree),
                *degree,
            )?;
            (law.to_json(), out.pretty)
        }
        ComputeCmd::Inverse { law, out } => (law.build()?.inverse_series().to_json(), out.pretty),
        ComputeCmd::NSeries { law, n, out } => (law.build()?.n_series(*n)?.to_json(), out.pretty),
        ComputeCmd::Lincomb { law, mults, out } => {
            let mults = parse_i64_list(mults)?;
            (law.build()?.lincomb(&mults)?.to_json(), out.pretty)
        }
        ComputeCmd::Zeta { law, mults, out } => {
            let mults = parse_i64_list(mults)?;
            (law.build()?.zeta_decompose(&mults)?.to_json(), out.pretty)
        }
        ComputeCmd::TwistFgl { law, tau, out } => {
            let law = law.build()?;
            let tau = parse_tau(tau, law.cap())?;
            (twist_fgl(&law, &tau)?.to_json(), out.pretty)
        }
        ComputeCmd::Todd { degree, tau, out } => {
            let tau = parse_tau(tau, *degree)?;
            let u = tau.u_series()?;
            let one =
                MultiSeries::constant(RingSpec::Rationals, 1, *degree, RingSpec::Rationals.one())?;
            let factor = one.divide_by_unit(&u)?;
            (
                serde_json::json!({ "inverseTodd": u.to_json(), "factor": factor.to_json() }),
                out.pretty,
            )
        }
        ComputeCmd::Euler {
            law,
            dims,
            line,
            out,
        } => {
            let ring = base_ring(law, dims)?;
            let line = parse_line(line)?;
            let cls = ring.euler_class(&line)?;
            (cls.to_json(&ring), out.pretty)
        }
        ComputeCmd::Chern {
            law,
            dims,
            lines,
            out,
        } => {
            let ring = base_ring(law, dims)?;
            let lines = parse_lines(lines)?;
            let classes = ring.chern_classes(&lines)?;
            let rendered: Vec<serde_json::Value> =
                classes.iter().map(|c| c.to_json(&ring)).collect();
            (serde_json::json!({ "classes": rendered }), out.pretty)
        }
        ComputeCmd::Push {
            law,
            dims,
            stage,
            out,
        } => {
            let base = base_ring(law, dims)?;
            let lines = parse_lines(stage)?;
            if lines.len() != 2 {
                return Err(AlgebraError::Parse(
                    "a stage needs exactly two line summands".into(),
                ));
            }
            let staged = base.adjoin_rank2(lines[0].clone(), lines[1].clone())?;
            let pushed = staged.push_rank2(&staged.one_class())?;
            (pushed.to_json(&base), out.pretty)
        }
        ComputeCmd::Tower { law, i, out } => {
            let law = law.build()?;
            let value = fgl_core::cellular::tower_class(&law, *i)?;
            (
                serde_json::json!({ "height": i, "value": law.ring().coeff_to_json(&value) }),
                out.pretty,
            )
        }
        ComputeCmd::ChM {
            degree,
            dims,
            line,
            out,
        } => {
            let dims = parse_i64_list(dims)?;
            let k = KRing::new(&dims, *degree)?;
            let line = parse_line(line)?;
            let bundle = VirtualSplitBundle::of_lines(vec![line]);
            let cls = mult_character(k.cells(), &bundle)?;
            (cls.to_json(k.cells()), out.pretty)
        }
        ComputeCmd::Grr {
            degree,
            dims,
            line,
            out,
        } => {
            let dims = parse_i64_list(dims)?;
            let k = KRing::new(&dims, *degree)?;
            let l = parse_line(line)?;
            let trivial = LineClass::trivial(l.0.len());

            let staged_k = k.adjoin_rank2(l.clone(), trivial.clone())?;
            let pushed_k = staged_k.cells().push_rank2(&staged_k.cells().one_class())?;
            let additive_base = additive_companion(&k)?;
            let lhs = character_of_k_class(&additive_base, &pushed_k)?;

            let staged_add = additive_base.adjoin_rank2(l.clone(), trivial)?;
            let width = staged_add.gen_count();
            let todd = todd_factor(RingSpec::Rationals, *degree)?;
            let mut td = staged_add.one_class();
            for summand in [&l, &LineClass::trivial(l.0.len())] {
                let mut root = summand.dual().pad_to(width)?;
                root.0[width - 1] += 1;
                let x = staged_add.euler_class(&root)?;
                let factor = staged_add.eval_series(&todd, std::slice::from_ref(&x))?;
                td = staged_add.mul_class(&td, &factor)?;
            }
            let rhs = staged_add.push_rank2(&td)?;
            (
                serde_json::json!({
                    "characterOfKPush": lhs.to_json(&additive_base),
                    "additivePushOfTodd": rhs.to_json(&additive_base),
                }),
                out.pretty,
            )
        }
    })
}

pub fn run(cmd: &ComputeCmd) -> i32 {
    match run_inner(cmd) {
        Ok((value, pretty)) => {
            print_json(&value, pretty);
            0
        }
        Err(e) => reject(&e),
    }
}
