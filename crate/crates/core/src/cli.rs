//! The `lat` command line.
//!
//! Lattice arguments are expressions (`diag(1,1,2)`, `E8 + Zn(1)`, `2*Zn(3)`)
//! or `@path` to a Gram matrix in the text format. Set-valued flags separate
//! members with `;`. Exit status: 0 on success, 1 when a check fails or a
//! counterexample is found, 2 on usage or parse errors.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::criterion::{
    check_criterion_sharded, check_minimality, check_prop2_hypothesis, check_prop3, enumerate_classes, FormSet,
    PartitionFamily, SearchSpace, Shard,
};
use crate::decomposition::indecomposable_summands;
use crate::embedding::{complement_of_vectors, represents};
use crate::enumeration::{min_dual_norm, min_norm, short_vectors};
use crate::error::LatticeError;
use crate::expr::parse_expr;
use crate::gram::{GramMatrix, IntMatrix};
use crate::rational::parse_rational;
use crate::reduction::lll_reduce;
use crate::suite;

#[derive(Parser, Debug)]
#[command(name = "lat", version, about = "Exact computations with positive-definite integral lattices")]
struct Cli {
    /// Print the structured report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Rank of the forms searched.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Cap on the diagonal of the reduced Gram matrices searched.
    #[arg(long = "max-diag", default_value_t = 6)]
    max_diag: i64,
    /// Optional cap on the determinant.
    #[arg(long = "max-det")]
    max_det: Option<i64>,
}

impl SpaceArgs {
    fn space(&self) -> Result<SearchSpace, LatticeError> {
        let s = SearchSpace::new(self.rank, self.max_diag)?;
        match self.max_det {
            Some(d) => s.with_max_det(d),
            None => Ok(s),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, determinant, minimal norms and an LLL-reduced Gram matrix.
    Info { lattice: String },
    /// Vectors of norm at most the bound (one of each ± pair).
    Shortvec {
        lattice: String,
        /// Integer or fraction `p/q`.
        #[arg(long)]
        bound: String,
    },
    /// Find an embedding of the source lattice into the target.
    Embed {
        #[arg(long)]
        target: String,
        #[arg(long)]
        source: String,
    },
    /// Orthogonal complement of an embedded copy of the source in the target.
    Complement {
        #[arg(long)]
        target: String,
        #[arg(long)]
        source: String,
    },
    /// Split into indecomposable orthogonal summands.
    Decompose { lattice: String },
    /// Gram matrix and minimal norm of the dual lattice.
    Dual { lattice: String },
    /// One representative per isometry class of a search space.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Check that every form of the space representing the set also represents A.
    CheckCriterion {
        #[arg(long = "a")]
        a: String,
        /// Members separated by `;`.
        #[arg(long)]
        set: String,
        #[command(flatten)]
        space: SpaceArgs,
        /// Split the classes of the space into this many shards.
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Which shard to check (0-based).
        #[arg(long, default_value_t = 0)]
        shard: usize,
    },
    /// For each member of the set, find a form representing the others but not A.
    CheckMinimality {
        #[arg(long = "a")]
        a: String,
        #[arg(long)]
        set: String,
        /// Forms tried before the search space, separated by `;`.
        #[arg(long, default_value = "")]
        witnesses: String,
        #[command(flatten)]
        space: SpaceArgs,
        /// Only try the given witnesses.
        #[arg(long)]
        no_search: bool,
    },
    /// Is L' generated by vectors shorter than the minimal dual norm of L?
    CheckProp2 {
        #[arg(long)]
        l: String,
        #[arg(long = "l-prime")]
        l_prime: String,
    },
    /// Check a ground set of unimodular lattices and a family of its subsets.
    CheckProp3 {
        /// Ground set members separated by `;`.
        #[arg(long)]
        ground: String,
        /// Parts as comma-separated member indices, separated by `;`
        /// (default: one part per member).
        #[arg(long)]
        parts: Option<String>,
    },
    /// Run the full reproduction suite.
    VerifyPaper {
        /// Only run these checks (comma-separated numbers 1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Parse { .. }
            | LatticeError::UnknownName(_)
            | LatticeError::Shape { .. }
            | LatticeError::NotSymmetric { .. }
            | LatticeError::NotPositiveDefinite { .. }
            | LatticeError::DuplicateMember(..)
            | LatticeError::InvalidSpace(_)
            | LatticeError::InvalidFamily(_) => Failure::Usage(format!("error: {e}\n")),
            _ => Failure::Check(format!("error: {e}\n")),
        }
    }
}

/// Parse `argv` (including the program name), run the command and return
/// the exit status with everything meant for the terminal.
pub fn run<S: AsRef<str>>(argv: &[S]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("reports serialize") + "\n"
            } else {
                r.text
            };
            (r.code, out)
        }
        Err(Failure::Usage(msg)) => (2, msg),
        Err(Failure::Check(msg)) => (1, msg),
    }
}

fn lattice(arg: &str) -> Result<GramMatrix, Failure> {
    let arg = arg.trim();
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("error: cannot read {path}: {e}\n")))?;
        return Ok(GramMatrix::from_text(&text)?);
    }
    Ok(parse_expr(arg)?)
}

fn lattice_list(arg: &str) -> Result<Vec<GramMatrix>, Failure> {
    arg.split(';').filter(|s| !s.trim().is_empty()).map(lattice).collect()
}

fn form_set(arg: &str) -> Result<FormSet, Failure> {
    Ok(FormSet::new(lattice_list(arg)?, arg.trim())?)
}

fn matrix_text(m: &IntMatrix) -> String {
    let width = m.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut s = String::new();
    for row in m {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

fn exit_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Info { lattice: l } => {
            let g = lattice(l)?;
            let red = lll_reduce(&g);
            let (mn, mdn) = if g.rank() > 0 {
                (Some(min_norm(&g)), Some(min_dual_norm(&g).to_string()))
            } else {
                (None, None)
            };
            let even = g.diag().iter().all(|d| d % 2 == 0);
            let mut text = format!("rank {}\ndet {}\n", g.rank(), g.det());
            if let (Some(mn), Some(mdn)) = (&mn, &mdn) {
                let _ = writeln!(text, "minimal norm {mn}\nminimal dual norm {mdn}");
            }
            let _ = writeln!(text, "{}\nLLL-reduced Gram matrix:\n{}", if even { "even" } else { "odd" }, red.gram);
            let json = json!({
                "rank": g.rank(),
                "det": g.det().to_string(),
                "min_norm": mn,
                "min_dual_norm": mdn,
                "even": even,
                "gram": g,
                "reduced_gram": red.gram,
            });
            Ok(Report { code: 0, text, json })
        }
        Command::Shortvec { lattice: l, bound } => {
            let g = lattice(l)?;
            let b = parse_rational(bound).ok_or_else(|| Failure::Usage(format!("error: bad bound `{bound}`\n")))?;
            let list = short_vectors(&g, &b);
            let mut text = format!("{} vectors (up to sign) of norm <= {}\n", list.len(), list.bound);
            for v in &list.vectors {
                let coords: Vec<String> = v.coords.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "{:>4}  {}", v.norm, coords.join(" "));
            }
            let json = json!({ "bound": list.bound.to_string(), "count": list.len(), "vectors": list.vectors });
            Ok(Report { code: 0, text, json })
        }
        Command::Embed { target, source } => {
            let (q, l) = (lattice(target)?, lattice(source)?);
            match represents(&q, &l) {
                Some(e) => {
                    let text = format!("represented; columns are images of the source basis:\n{}", matrix_text(&e.map));
                    Ok(Report { code: 0, text, json: json!({ "represented": true, "map": e.map }) })
                }
                None => Ok(Report {
                    code: 1,
                    text: "not represented\n".into(),
                    json: json!({ "represented": false, "map": null }),
                }),
            }
        }
        Command::Complement { target, source } => {
            let (q, l) = (lattice(target)?, lattice(source)?);
            let Some(e) = represents(&q, &l) else {
                return Ok(Report {
                    code: 1,
                    text: "source is not represented by target\n".into(),
                    json: json!({ "represented": false }),
                });
            };
            let (c, basis) = complement_of_vectors(&q, &e.columns())?;
            let text = format!(
                "complement of rank {} and det {}:\n{}\nbasis (columns, target coordinates):\n{}",
                c.rank(),
                c.det(),
                c,
                matrix_text(&basis)
            );
            let json = json!({ "represented": true, "map": e.map, "complement": c, "basis": basis });
            Ok(Report { code: 0, text, json })
        }
        Command::Decompose { lattice: l } => {
            let g = lattice(l)?;
            let d = indecomposable_summands(&g);
            let mut text = format!("{} indecomposable summand(s)\n", d.len());
            for (i, (s, e)) in d.summands.iter().zip(&d.embeddings).enumerate() {
                let _ = writeln!(text, "summand {i}: rank {} det {}\n{}", s.rank(), s.det(), s);
                let _ = writeln!(text, "basis (columns):\n{}", matrix_text(&e.map));
            }
            let json = serde_json::to_value(&d).expect("decomposition serializes");
            Ok(Report { code: 0, text, json })
        }
        Command::Dual { lattice: l } => {
            let g = lattice(l)?;
            let dual = g.dual_gram();
            let integral = dual.is_integral();
            let mdn = (g.rank() > 0).then(|| min_dual_norm(&g).to_string());
            let mut text = format!("dual Gram matrix (det {}):\n{}", g.det(), dual);
            if let Some(m) = &mdn {
                let _ = writeln!(text, "minimal dual norm {m}");
            }
            let _ = writeln!(text, "{}", if integral { "integral (self-dual)" } else { "not integral" });
            let rows: Vec<Vec<String>> =
                dual.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            let json = json!({ "det": g.det().to_string(), "dual_gram": rows, "integral": integral, "min_dual_norm": mdn });
            Ok(Report { code: 0, text, json })
        }
        Command::Enumerate { space } => {
            let space = space.space()?;
            let classes = enumerate_classes(&space);
            let mut text = format!("{} classes in {space}\n", classes.len());
            for g in &classes {
                let _ = writeln!(text, "{g}");
            }
            Ok(Report { code: 0, text, json: json!({ "space": space, "count": classes.len(), "classes": classes }) })
        }
        Command::CheckCriterion { a, set, space, shards, shard } => {
            let a = lattice(a)?;
            let s = form_set(set)?;
            let space = space.space()?;
            let shard = Shard::new(*shard, *shards)?;
            let r = check_criterion_sharded(&a, &s, &space, shard)?;
            let json = serde_json::to_value(&r).expect("report serializes");
            Ok(Report { code: exit_code(r.verified()), text: r.to_string(), json })
        }
        Command::CheckMinimality { a, set, witnesses, space, no_search } => {
            let a = lattice(a)?;
            let s = form_set(set)?;
            let w = lattice_list(witnesses)?;
            let space = space.space()?;
            let r = check_minimality(&a, &s, &w, (!no_search).then_some(&space));
            let json = serde_json::to_value(&r).expect("report serializes");
            Ok(Report { code: exit_code(r.minimal()), text: r.to_string(), json })
        }
        Command::CheckProp2 { l, l_prime } => {
            let r = check_prop2_hypothesis(&lattice(l)?, &lattice(l_prime)?)?;
            let json = serde_json::to_value(&r).expect("report serializes");
            Ok(Report { code: exit_code(r.holds), text: r.to_string(), json })
        }
        Command::CheckProp3 { ground, parts } => {
            let ground = form_set(ground)?;
            let parts: Vec<Vec<usize>> = match parts {
                None => (0..ground.len()).map(|i| vec![i]).collect(),
                Some(p) => p
                    .split(';')
                    .map(|part| {
                        part.split(',')
                            .filter(|t| !t.trim().is_empty())
                            .map(|t| t.trim().parse::<usize>())
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure::Usage(format!("error: bad --parts `{p}`\n")))?,
            };
            let family = PartitionFamily::new(ground, parts)?;
            let r = check_prop3(&family);
            let json = serde_json::to_value(&r).expect("report serializes");
            Ok(Report { code: exit_code(r.passed()), text: r.to_string(), json })
        }
        Command::VerifyPaper { only } => {
            let all: [fn() -> suite::Outcome; 10] = [
                suite::criterion_1,
                suite::criterion_2,
                suite::criterion_3,
                suite::criterion_4,
                suite::criterion_5,
                suite::criterion_6,
                suite::criterion_7,
                suite::criterion_8,
                suite::criterion_9,
                suite::criterion_10,
            ];
            if let Some(bad) = only.iter().find(|&&i| i == 0 || i > all.len()) {
                return Err(Failure::Usage(format!("error: no check number {bad}\n")));
            }
            let outcomes: Vec<suite::Outcome> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| only.is_empty() || only.contains(&(i + 1)))
                .map(|(_, f)| f())
                .collect();
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let mut text: String = outcomes.iter().map(ToString::to_string).collect();
            let _ = writeln!(text, "{passed}/{} checks passed", outcomes.len());
            let ok = passed == outcomes.len();
            Ok(Report { code: exit_code(ok), text, json: json!({ "passed": ok, "outcomes": outcomes }) })
        }
    }
}
