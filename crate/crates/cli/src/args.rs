use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gadgetlab", version, about = "Label Cover gadget reductions, t-agreeing families and their checkers")]
pub struct Cli {
    /// Print reports as tab-separated key/value lines instead of JSON.
    #[arg(long, global = true)]
    pub tsv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Label Cover instances: generation, evaluation and structural checks.
    #[command(subcommand)]
    Lc(LcCommand),
    /// Families of words over [q]: agreement, predicates, shifting and search.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Closed-form size bounds for t-agreeing families.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Gadget hypergraphs over Label Cover instances.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Colorings and independent sets of gadgets or explicit hypergraphs.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Exact and heuristic solvers on explicit hypergraphs.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Decode an independent set of a gadget into Label Cover labelings.
    #[command(subcommand)]
    Decode(DecodeCommand),
    /// End-to-end runs on planted instances.
    #[command(subcommand)]
    Pipeline(PipelineCommand),
}

#[derive(Subcommand, Debug)]
pub enum LcCommand {
    /// Generate a planted instance; writes the instance JSON to --out.
    Gen(GenArgs),
    /// Check T-smoothness of a layered instance.
    CheckSmooth(CheckSmoothArgs),
    /// Check weak density of a layered instance.
    CheckDense(CheckDenseArgs),
    /// Fraction of constraints satisfied by an assignment.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LcKind {
    Bipartite,
    Layered,
}

#[derive(Args, Debug, Clone)]
pub struct BipartiteShape {
    /// Number of left variables.
    #[arg(long, default_value_t = 6)]
    pub left: usize,
    /// Number of right variables.
    #[arg(long, default_value_t = 4)]
    pub right: usize,
    /// Left alphabet size.
    #[arg(long = "L", default_value_t = 4)]
    pub left_alphabet: u32,
    /// Right alphabet size.
    #[arg(long = "R", default_value_t = 2)]
    pub right_alphabet: u32,
    /// Degree of each left variable (needs degree <= right and right | left * degree).
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LayeredShape {
    /// Comma-separated layer sizes.
    #[arg(long, value_delimiter = ',', default_value = "3,3,3")]
    pub layers: Vec<usize>,
    /// Comma-separated layer alphabet sizes.
    #[arg(long, value_delimiter = ',', default_value = "4,3,2")]
    pub alphabets: Vec<u32>,
    /// Neighbors of each variable in every later layer; complete when omitted.
    #[arg(long = "layer-degree")]
    pub layer_degree: Option<usize>,
    /// Smoothness target T for the generated projections.
    #[arg(long = "T")]
    pub smoothness: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = LcKind::Bipartite)]
    pub kind: LcKind,
    #[command(flatten)]
    pub bipartite: BipartiteShape,
    #[command(flatten)]
    pub layered: LayeredShape,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance output path (`-` for stdout).
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Where to write the planted assignment.
    #[arg(long)]
    pub planted: Option<String>,
}

#[derive(Args, Debug)]
pub struct CheckSmoothArgs {
    #[arg(long)]
    pub instance: String,
    /// Smoothness parameter T.
    #[arg(long = "T")]
    pub smoothness: f64,
    /// Label sets up to this size are enumerated exhaustively.
    #[arg(long, default_value_t = 3)]
    pub s_max: usize,
    /// Random label sets per variable for larger sizes.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct CheckDenseArgs {
    #[arg(long)]
    pub instance: String,
    #[arg(long)]
    pub m: usize,
    /// Random cases when the instance is too large for exhaustive checking.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub instance: String,
    #[arg(long)]
    pub assignment: String,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCommand {
    /// Agreement set of the given words (digits 0..q-1).
    Agreement(AgreementArgs),
    /// Whether a family is k-wise t-agreeing (and, for q = 2, t-intersecting).
    Check(FamilyCheckArgs),
    /// Shift a binary family along one coordinate.
    Shift(ShiftArgs),
    /// Shift a binary family to a fixpoint.
    Monotonize(MonotonizeArgs),
    /// Largest k-wise t-agreeing family in [q]^n.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct AgreementArgs {
    #[arg(long)]
    pub q: u8,
    /// Words as digit strings.
    #[arg(required = true)]
    pub words: Vec<String>,
}

#[derive(Args, Debug)]
pub struct FamilyCheckArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct ShiftArgs {
    #[arg(long)]
    pub family: String,
    /// 1-based coordinate.
    #[arg(long)]
    pub i: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct MonotonizeArgs {
    #[arg(long)]
    pub family: String,
    /// Where to write the shifted family.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyMethod {
    Exact,
    BranchAndBound,
    Greedy,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u8,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = FamilyMethod::BranchAndBound)]
    pub method: FamilyMethod,
    #[arg(long, default_value_t = gadgetlab::families::DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Greedy restarts.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Where to write the witness family.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// 3^(n-3t+1) sum_{i<t} C(3t-1, i) 2^i, exact.
    Ft(FtArgs),
    /// 2^n ((sqrt 5 - 1) / 2)^t.
    Golden(NtArgs),
    /// 3^(n - t/10).
    Simplified(NtArgs),
}

#[derive(Args, Debug)]
pub struct NtArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub t: u64,
}

#[derive(Args, Debug)]
pub struct FtArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub t: u64,
    /// Also compute the exact maximum by search and compare.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 3)]
    pub q: u8,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GadgetArgs {
    /// Label Cover instance (JSON).
    #[arg(long)]
    pub instance: String,
    #[arg(long, default_value_t = 3)]
    pub q: u8,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCommand {
    /// The 2k-uniform gadget over a bipartite instance.
    TwoK(ReduceArgs),
    /// The (k+1)-uniform gadget over a layered instance.
    KPlusOne(ReduceArgs),
    /// Write a gadget as an explicit hgr file plus vertex map.
    Materialize(MaterializeArgs),
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub gadget: GadgetArgs,
    /// Satisfying assignment; writes its completeness coloring to --coloring-out.
    #[arg(long, requires = "coloring_out")]
    pub assignment: Option<String>,
    #[arg(long)]
    pub coloring_out: Option<String>,
}

#[derive(Args, Debug)]
pub struct MaterializeArgs {
    #[command(flatten)]
    pub gadget: GadgetArgs,
    #[arg(long)]
    pub hgr_out: String,
    #[arg(long)]
    pub map_out: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_vertices: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_edges: u64,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_evaluations: u64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyModeArgs {
    /// Draw this many random edge probes instead of scanning exhaustively.
    #[arg(long)]
    pub sampled: Option<u64>,
    /// Evaluation cap of the exhaustive scan.
    #[arg(long, default_value_t = gadgetlab::reduction::DEFAULT_EVALUATION_CAP)]
    pub cap: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Check that a coloring has no monochromatic edge.
    Coloring(VerifyColoringArgs),
    /// Check that a vertex set contains no edge.
    Independent(VerifyIndependentArgs),
}

#[derive(Args, Debug)]
pub struct TargetArgs {
    /// Label Cover instance defining the gadget.
    #[arg(long, conflicts_with = "hgr")]
    pub instance: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub q: u8,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Explicit hypergraph (hgr).
    #[arg(long)]
    pub hgr: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyColoringArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub coloring: String,
    #[command(flatten)]
    pub mode: VerifyModeArgs,
}

#[derive(Args, Debug)]
pub struct VerifyIndependentArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// JSON array of 0-based vertex indices.
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub mode: VerifyModeArgs,
}

#[derive(Subcommand, Debug)]
pub enum SolveCommand {
    /// Maximum independent set.
    Mis(MisArgs),
    /// Proper coloring with c colors.
    Color(ColorArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MisKind {
    Exact,
    Greedy,
    LocalSearch,
}

#[derive(Args, Debug)]
pub struct MisArgs {
    #[arg(long)]
    pub hgr: String,
    #[arg(long, value_enum, default_value_t = MisKind::Exact)]
    pub method: MisKind,
    #[arg(long, default_value_t = gadgetlab::solvers::DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// Where to write the set as a JSON array.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long)]
    pub hgr: String,
    #[arg(long)]
    pub c: u32,
    #[arg(long, default_value_t = gadgetlab::solvers::DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    /// Where to write the coloring.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum DecodeCommand {
    /// Decode against a 2k-uniform gadget.
    Bipartite(DecodeArgs),
    /// Decode against a (k+1)-uniform gadget.
    Layered(DecodeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Off,
    Sampled,
    Exhaustive,
}

#[derive(Args, Debug, Clone)]
pub struct DecodeKnobs {
    /// Heaviness threshold.
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Largest list size.
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Derive t = ceil(c ln(1/delta)) instead of using --t.
    #[arg(long = "paper-schedule")]
    pub schedule: bool,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Node budget per tuple search; unlimited when omitted.
    #[arg(long)]
    pub tuple_budget: Option<u64>,
    /// Independence check before decoding.
    #[arg(long, value_enum, default_value_t = VerifyKind::Sampled)]
    pub verify: VerifyKind,
    #[arg(long, default_value_t = gadgetlab::decode::DEFAULT_VERIFY_PROBES)]
    pub probes: u64,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub gadget: GadgetArgs,
    /// JSON array of 0-based vertex indices.
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub knobs: DecodeKnobs,
    /// Evaluation cap of exhaustive verification.
    #[arg(long, default_value_t = gadgetlab::reduction::DEFAULT_EVALUATION_CAP)]
    pub cap: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum PipelineCommand {
    /// Planted instance, gadget, completeness coloring, verification.
    Completeness(PipelineArgs),
    /// Planted instance, gadget, one color class, decoding.
    Soundness(SoundnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GadgetChoice {
    TwoK,
    KPlusOne,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long, value_enum, default_value_t = GadgetChoice::TwoK)]
    pub kind: GadgetChoice,
    #[arg(long, default_value_t = 3)]
    pub q: u8,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Number of left variables.
    #[arg(long, default_value_t = 4)]
    pub left: usize,
    /// Number of right variables.
    #[arg(long, default_value_t = 2)]
    pub right: usize,
    /// Left alphabet size.
    #[arg(long = "L", default_value_t = 3)]
    pub left_alphabet: u32,
    /// Right alphabet size.
    #[arg(long = "R", default_value_t = 2)]
    pub right_alphabet: u32,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[command(flatten)]
    pub layered: LayeredShape,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sampled verification with this many probes instead of an exhaustive scan.
    #[arg(long)]
    pub sampled: Option<u64>,
    #[arg(long, default_value_t = gadgetlab::reduction::DEFAULT_EVALUATION_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug)]
pub struct SoundnessArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Color class used as the independent set.
    #[arg(long, default_value_t = 1)]
    pub color: u32,
    #[command(flatten)]
    pub knobs: DecodeKnobs,
}
