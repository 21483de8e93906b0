//! `subelections`: solve election isomorphism problems, sample elections
//! from statistical models, run similarity/timing experiments, build
//! clique-reduction instances, and export integer programs.
//!
//! Exit codes: 0 = found / optimum computed, 1 = negative decision,
//! 2 = usage or input error, 3 = solver size limit exceeded.

mod formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use subelections::cultures::{Culture, CultureSpec};
use subelections::experiments::{self, SizeSweep, SolverMode};
use subelections::hard::{self, BruteForceLimits};
use subelections::reductions;
use subelections::{
    ilp, iso, CandidateMatching, Election, Error, IsoWitness, MatchingCase, Variant,
    VoterMatching,
};

#[derive(Parser)]
#[command(name = "subelections", version, about = "Election isomorphism toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an isomorphism, subelection, or maximum-common problem.
    Solve(SolveArgs),
    /// Sample an election from a statistical model and write it as .soc.
    Sample(SampleArgs),
    /// Similarity and timing experiments over model rosters.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
    /// Build solver instances from graphs via the clique reductions.
    Reduce {
        #[command(subcommand)]
        which: ReduceCommand,
    },
    /// Export the voter-subelection integer program in LP format.
    ExportIlp(ExportIlpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Iso,
    Subiso,
    CandSubiso,
    VoterSubiso,
    MaxCommon,
    MaxCommonCand,
    MaxCommonVoter,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CaseArg {
    None,
    Voter,
    Cand,
    Both,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Which matchings are fixed in advance.
    #[arg(long, value_enum, default_value = "none")]
    case: CaseArg,
    /// Candidate matching file (`left right` per line); required for
    /// --case cand/both.
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Voter matching file; required for --case voter/both.
    #[arg(long)]
    pi: Option<PathBuf>,
    /// For max-common-voter: stop once this many voters are matched and
    /// report yes/no against the threshold.
    #[arg(long)]
    threshold: Option<usize>,
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    /// Model spec: id, ic, urn(alpha=A), mallows(normphi=P), 1d, walsh,
    /// conitzer.
    #[arg(long)]
    culture: String,
    #[arg(short = 'm', long = "candidates")]
    m: usize,
    #[arg(short = 'n', long = "voters")]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Pairwise-model similarity matrix (mean matched-voter fraction).
    Matrix(MatrixArgs),
    /// Mean solver time per model over a size sweep.
    Timing(TimingArgs),
}

#[derive(Args)]
struct MatrixArgs {
    /// Comma-separated model specs; defaults to the nine-model roster.
    #[arg(long)]
    models: Option<String>,
    #[arg(short = 'm', long = "candidates")]
    m: usize,
    #[arg(short = 'n', long = "voters")]
    n: usize,
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also write one LP file per sampled pair into this directory.
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Voters,
    Candidates,
}

#[derive(Args)]
struct TimingArgs {
    /// Comma-separated model specs; defaults to the six profiled models.
    #[arg(long)]
    models: Option<String>,
    /// Which dimension the sizes refer to.
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// The size of the dimension held fixed (m when sweeping voters, n when
    /// sweeping candidates).
    #[arg(long)]
    fixed: usize,
    /// Comma-separated swept sizes, e.g. 5,10,15.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Clique-to-subelection instance: PREFIX_left.soc embeds into
    /// PREFIX_right.soc iff the graph has a k-clique.
    Thm2 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// Output path prefix.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Clique-to-common-candidates instance with identity matchings: the
    /// optimum of max-common-cand --case both equals the graph's clique
    /// number.
    Thm4 {
        #[arg(long)]
        graph: PathBuf,
        /// Output path prefix.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct ExportIlpArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

enum Outcome {
    Found,
    NotFound,
}

enum CliError {
    Usage(String),
    Input(PathBuf, String),
    Core(Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(..) => 2,
            CliError::Core(Error::SizeLimit(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Input(path, msg) => write!(f, "{}: {msg}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(path.to_path_buf(), e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Input(path.to_path_buf(), e.to_string()))
}

fn load_election(path: &Path) -> CliResult<Election> {
    parse_in(path, formats::parse_election)
}

fn parse_in<T>(path: &Path, parse: impl Fn(&str) -> Result<T, formats::ParseError>) -> CliResult<T> {
    let text = read_to_string(path)?;
    parse(&text).map_err(|e| CliError::Input(path.to_path_buf(), e.to_string()))
}

fn load_matching_pairs(path: &Path) -> CliResult<Vec<(usize, usize)>> {
    parse_in(path, formats::parse_matching)
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Solve(args) => solve(args),
        Command::Sample(args) => sample(args),
        Command::Experiment { which } => experiment(which),
        Command::Reduce { which } => reduce(which),
        Command::ExportIlp(args) => export_ilp(args),
    }
}

fn build_case(args: &SolveArgs) -> CliResult<MatchingCase> {
    let expect = |flag: &str, wanted: bool, present: bool| -> CliResult<()> {
        if wanted && !present {
            Err(CliError::Usage(format!("--case {} requires --{flag}", case_name(args.case))))
        } else if !wanted && present {
            Err(CliError::Usage(format!("--{flag} is not allowed with --case {}", case_name(args.case))))
        } else {
            Ok(())
        }
    };
    let wants_sigma = matches!(args.case, CaseArg::Cand | CaseArg::Both);
    let wants_pi = matches!(args.case, CaseArg::Voter | CaseArg::Both);
    expect("sigma", wants_sigma, args.sigma.is_some())?;
    expect("pi", wants_pi, args.pi.is_some())?;
    let sigma = match &args.sigma {
        Some(path) => Some(CandidateMatching::from_pairs(load_matching_pairs(path)?)?),
        None => None,
    };
    let pi = match &args.pi {
        Some(path) => Some(VoterMatching::from_pairs(load_matching_pairs(path)?)?),
        None => None,
    };
    Ok(match args.case {
        CaseArg::None => MatchingCase::NoMatching,
        CaseArg::Voter => MatchingCase::VoterMatchingGiven(pi.unwrap()),
        CaseArg::Cand => MatchingCase::CandidateMatchingGiven(sigma.unwrap()),
        CaseArg::Both => MatchingCase::BothMatchingsGiven(sigma.unwrap(), pi.unwrap()),
    })
}

fn case_name(case: CaseArg) -> &'static str {
    match case {
        CaseArg::None => "none",
        CaseArg::Voter => "voter",
        CaseArg::Cand => "cand",
        CaseArg::Both => "both",
    }
}

fn variant_name(variant: VariantArg) -> &'static str {
    match variant {
        VariantArg::Iso => "iso",
        VariantArg::Subiso => "subiso",
        VariantArg::CandSubiso => "cand-subiso",
        VariantArg::VoterSubiso => "voter-subiso",
        VariantArg::MaxCommon => "max-common",
        VariantArg::MaxCommonCand => "max-common-cand",
        VariantArg::MaxCommonVoter => "max-common-voter",
    }
}

fn print_witness(w: &IsoWitness) {
    let render = |pairs: &[(usize, usize)]| {
        pairs
            .iter()
            .map(|(l, r)| format!("{l}->{r}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if !w.sigma.is_empty() {
        println!("sigma: {}", render(w.sigma.pairs()));
    }
    if !w.pi.is_empty() {
        println!("pi: {}", render(w.pi.pairs()));
    }
}

fn solve(args: SolveArgs) -> CliResult<Outcome> {
    if args.threshold.is_some() && !matches!(args.variant, VariantArg::MaxCommonVoter) {
        return Err(CliError::Usage(
            "--threshold applies to --variant max-common-voter only".into(),
        ));
    }
    let e1 = load_election(&args.a)?;
    let e2 = load_election(&args.b)?;
    let case = build_case(&args)?;
    println!("variant: {}", variant_name(args.variant));
    println!("case: {}", case_name(args.case));

    let decision = |witness: Option<IsoWitness>| -> Outcome {
        match witness {
            Some(w) => {
                println!("answer: yes");
                println!("value: {}", w.value);
                print_witness(&w);
                Outcome::Found
            }
            None => {
                println!("answer: no");
                Outcome::NotFound
            }
        }
    };

    match args.variant {
        VariantArg::Iso => Ok(decision(iso::election_isomorphism(&e1, &e2, &case)?)),
        VariantArg::VoterSubiso => {
            Ok(decision(iso::voter_subelection_isomorphism(&e1, &e2, &case)?))
        }
        VariantArg::Subiso | VariantArg::CandSubiso => {
            let variant = if matches!(args.variant, VariantArg::Subiso) {
                Variant::Subelection
            } else {
                Variant::CandSubelection
            };
            let witness = match &case {
                MatchingCase::NoMatching | MatchingCase::VoterMatchingGiven(_) => {
                    if matches!(variant, Variant::Subelection) {
                        hard::subelection_isomorphism(&e1, &e2, &case)?
                    } else {
                        hard::cand_subelection_isomorphism(&e1, &e2, &case)?
                    }
                }
                MatchingCase::CandidateMatchingGiven(sigma) => {
                    iso::subelection_isomorphism_given_cand_matching(&e1, &e2, sigma, None, variant)?
                }
                MatchingCase::BothMatchingsGiven(sigma, pi) => {
                    iso::subelection_isomorphism_given_cand_matching(
                        &e1,
                        &e2,
                        sigma,
                        Some(pi),
                        variant,
                    )?
                }
            };
            Ok(decision(witness))
        }
        VariantArg::MaxCommonVoter => {
            let witness = iso::max_common_voter_subelection(&e1, &e2, &case, args.threshold)?;
            match args.threshold {
                Some(t) => {
                    if witness.value >= t {
                        println!("answer: yes");
                        println!("value: {}", witness.value);
                        print_witness(&witness);
                        Ok(Outcome::Found)
                    } else {
                        println!("answer: no");
                        println!("value: {}", witness.value);
                        Ok(Outcome::NotFound)
                    }
                }
                None => {
                    println!("answer: optimum");
                    println!("value: {}", witness.value);
                    print_witness(&witness);
                    Ok(Outcome::Found)
                }
            }
        }
        VariantArg::MaxCommonCand => {
            if let MatchingCase::BothMatchingsGiven(sigma, pi) = &case {
                let witness = hard::max_common_cand_subelection_both(&e1, &e2, sigma, pi)?;
                println!("answer: optimum");
                println!("value: {}", witness.value);
                print_witness(&witness);
                Ok(Outcome::Found)
            } else {
                let value = hard::brute_force_max_common(
                    &e1,
                    &e2,
                    Variant::MaxCommonCand,
                    &case,
                    BruteForceLimits::for_case(&case),
                )?;
                println!("answer: optimum");
                println!("value: {value}");
                Ok(Outcome::Found)
            }
        }
        VariantArg::MaxCommon => {
            let value = hard::brute_force_max_common(
                &e1,
                &e2,
                Variant::MaxCommon,
                &case,
                BruteForceLimits::for_case(&case),
            )?;
            println!("answer: optimum");
            println!("value: {value}");
            Ok(Outcome::Found)
        }
    }
}

fn parse_culture(spec: &str) -> CliResult<Culture> {
    spec.parse::<Culture>().map_err(|e| CliError::Usage(e.to_string()))
}

fn sample(args: SampleArgs) -> CliResult<Outcome> {
    let culture = parse_culture(&args.culture)?;
    let spec = CultureSpec::new(culture, args.m, args.n, args.seed)?;
    let election = subelections::cultures::sample(&spec);
    write_file(&args.output, &formats::write_election(&election))?;
    Ok(Outcome::Found)
}

fn parse_model_list(arg: Option<&str>, default: Vec<Culture>) -> CliResult<Vec<Culture>> {
    match arg {
        None => Ok(default),
        Some(list) => list.split(',').map(|s| parse_culture(s.trim())).collect(),
    }
}

fn experiment(which: ExperimentCommand) -> CliResult<Outcome> {
    match which {
        ExperimentCommand::Matrix(args) => {
            if let Some(jobs) = args.jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global()
                    .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
            }
            let models = parse_model_list(
                args.models.as_deref(),
                subelections::experiments::default_model_roster(),
            )?;
            let mode = match &args.export_lp {
                Some(dir) => {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| CliError::Input(dir.clone(), e.to_string()))?;
                    SolverMode::IlpExport(dir.clone())
                }
                None => SolverMode::Poly,
            };
            let matrix = experiments::run_similarity_matrix(
                &models, args.m, args.n, args.pairs, args.seed, &mode,
            )?;
            let mut csv = Vec::new();
            experiments::write_matrix_csv(&matrix, &mut csv)?;
            write_file(&args.csv, std::str::from_utf8(&csv).expect("csv is utf-8"))?;
            if let Some(svg_path) = &args.svg {
                let mut svg = Vec::new();
                experiments::render_svg_heatmap(&matrix, &mut svg)?;
                write_file(svg_path, std::str::from_utf8(&svg).expect("svg is utf-8"))?;
            }
            Ok(Outcome::Found)
        }
        ExperimentCommand::Timing(args) => {
            let models = parse_model_list(
                args.models.as_deref(),
                subelections::experiments::timing_model_roster(),
            )?;
            let sizes: Vec<usize> = args
                .sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad size {:?}", s.trim())))
                })
                .collect::<CliResult<_>>()?;
            let sweep = match args.sweep {
                SweepArg::Voters => SizeSweep::Voters { m: args.fixed, sizes },
                SweepArg::Candidates => SizeSweep::Candidates { n: args.fixed, sizes },
            };
            let table = experiments::run_timing(&models, sweep, args.pairs, args.seed)?;
            let mut csv = Vec::new();
            experiments::write_timing_csv(&table, &mut csv)?;
            write_file(&args.csv, std::str::from_utf8(&csv).expect("csv is utf-8"))?;
            Ok(Outcome::Found)
        }
    }
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn reduce(which: ReduceCommand) -> CliResult<Outcome> {
    match which {
        ReduceCommand::Thm2 { graph, k, output } => {
            let g = parse_in(&graph, formats::parse_graph)?;
            let (left, right) = reductions::clique_to_subiso_instance(&g, k)?;
            write_file(&prefixed(&output, "_left.soc"), &formats::write_election(&left))?;
            write_file(&prefixed(&output, "_right.soc"), &formats::write_election(&right))?;
            Ok(Outcome::Found)
        }
        ReduceCommand::Thm4 { graph, output } => {
            let g = parse_in(&graph, formats::parse_graph)?;
            let (left, right, sigma, pi) = reductions::clique_to_common_cand_instance(&g)?;
            write_file(&prefixed(&output, "_left.soc"), &formats::write_election(&left))?;
            write_file(&prefixed(&output, "_right.soc"), &formats::write_election(&right))?;
            write_file(&prefixed(&output, "_sigma.matching"), &formats::write_matching(sigma.pairs()))?;
            write_file(&prefixed(&output, "_pi.matching"), &formats::write_matching(pi.pairs()))?;
            Ok(Outcome::Found)
        }
    }
}

fn export_ilp(args: ExportIlpArgs) -> CliResult<Outcome> {
    let e1 = load_election(&args.a)?;
    let e2 = load_election(&args.b)?;
    let model = ilp::build_ilp(&e1, &e2)?;
    let mut buf = Vec::new();
    ilp::write_lp(&model, &mut buf)?;
    write_file(&args.output, std::str::from_utf8(&buf).expect("lp is utf-8"))?;
    Ok(Outcome::Found)
}
