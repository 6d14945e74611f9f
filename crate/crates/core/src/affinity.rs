//! Affinity functions and their less-than-convex combinations.
//!
//! An affinity maps an ordered pair of actors to `[0, 1]` and need not be
//! symmetric. Matrices are dense and row-major with a zero diagonal.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{GraphBuilder, WeightedGraph};

/// Slack allowed on `alpha + beta <= 1` for grid values such as `0.15 + 0.85`.
pub const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffinityError {
    #[error("constraint alpha + beta <= 1 violated: alpha + beta = {sum}")]
    SumTooLarge { sum: f64 },
    #[error("constraint alpha + beta > 0 violated: alpha + beta = {sum}")]
    SumNotPositive { sum: f64 },
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("shape mismatch: {0} vs {1} nodes")]
    Shape(usize, usize),
    #[error("affinity matrix is not symmetric at ({0}, {1}); symmetrize it first")]
    Asymmetric(usize, usize),
    #[error("threshold must be finite and >= 0, got {0}")]
    Threshold(f64),
    #[error("invalid affinity spec {spec:?}: {reason}")]
    Spec { spec: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffinityFn {
    BestFriend,
    BestCommonFriend,
    Machiavelli,
}

impl AffinityFn {
    pub const ALL: [AffinityFn; 3] = [
        AffinityFn::BestFriend,
        AffinityFn::BestCommonFriend,
        AffinityFn::Machiavelli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AffinityFn::BestFriend => "bf",
            AffinityFn::BestCommonFriend => "bcf",
            AffinityFn::Machiavelli => "mach",
        }
    }

    pub fn compute(self, g: &WeightedGraph, degree: DegreeMode) -> AffinityMatrix {
        match self {
            AffinityFn::BestFriend => best_friend(g),
            AffinityFn::BestCommonFriend => best_common_friend(g),
            AffinityFn::Machiavelli => machiavelli(g, degree),
        }
    }
}

impl fmt::Display for AffinityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AffinityFn {
    type Err = AffinityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AffinityFn::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| AffinityError::Spec {
                spec: s.to_owned(),
                reason: "expected one of bf, bcf, mach".into(),
            })
    }
}

/// Centrality used for `D(z)` in the Machiavelli affinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    #[default]
    Degree,
    Strength,
}

impl FromStr for DegreeMode {
    type Err = AffinityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "degree" => Ok(DegreeMode::Degree),
            "strength" => Ok(DegreeMode::Strength),
            other => Err(AffinityError::Spec {
                spec: other.to_owned(),
                reason: "degree mode must be degree or strength".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Symmetrization {
    #[default]
    Mean,
    Max,
    Min,
}

impl Symmetrization {
    pub fn name(self) -> &'static str {
        match self {
            Symmetrization::Mean => "mean",
            Symmetrization::Max => "max",
            Symmetrization::Min => "min",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Symmetrization::Mean => 0.5 * (a + b),
            Symmetrization::Max => a.max(b),
            Symmetrization::Min => a.min(b),
        }
    }
}

impl fmt::Display for Symmetrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symmetrization {
    type Err = AffinityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mean" => Ok(Symmetrization::Mean),
            "max" => Ok(Symmetrization::Max),
            "min" => Ok(Symmetrization::Min),
            other => Err(AffinityError::Spec {
                spec: other.to_owned(),
                reason: "symmetrization must be mean, max or min".into(),
            }),
        }
    }
}

/// Mixing weights of `alpha * f1 + beta * f2` with `0 < alpha + beta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinationParams {
    alpha: f64,
    beta: f64,
}

impl CombinationParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, AffinityError> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(AffinityError::OutOfRange { name, value });
            }
        }
        let sum = alpha + beta;
        if sum > 1.0 + SUM_TOLERANCE {
            return Err(AffinityError::SumTooLarge { sum });
        }
        if sum <= 0.0 {
            return Err(AffinityError::SumNotPositive { sum });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when `alpha + beta = 1`, i.e. an ordinary convex combination.
    pub fn is_convex(&self) -> bool {
        (self.alpha + self.beta - 1.0).abs() <= SUM_TOLERANCE
    }
}

/// How an affinity matrix was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffinitySpec {
    Single(AffinityFn),
    Combine {
        first: AffinityFn,
        second: AffinityFn,
        params: CombinationParams,
    },
}

/// Affinity spec plus the symmetrization applied afterwards, if any.
///
/// Text form: `bf`, `bf(sym=mean)` or
/// `combine(bf,bcf,alpha=0.25,beta=0.50,sym=mean)` (the `sym` argument is
/// optional).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub spec: AffinitySpec,
    pub sym: Option<Symmetrization>,
}

impl Provenance {
    pub fn single(f: AffinityFn) -> Self {
        Self {
            spec: AffinitySpec::Single(f),
            sym: None,
        }
    }

    pub fn with_sym(mut self, sym: Symmetrization) -> Self {
        self.sym = Some(sym);
        self
    }
}

fn fmt_param(x: f64) -> String {
    let short = format!("{x:.2}");
    if short.parse::<f64>() == Ok(x) {
        short
    } else {
        x.to_string()
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.spec, self.sym) {
            (AffinitySpec::Single(func), None) => write!(f, "{func}"),
            (AffinitySpec::Single(func), Some(sym)) => write!(f, "{func}(sym={sym})"),
            (AffinitySpec::Combine { first, second, params }, sym) => {
                write!(
                    f,
                    "combine({first},{second},alpha={},beta={}",
                    fmt_param(params.alpha),
                    fmt_param(params.beta)
                )?;
                if let Some(sym) = sym {
                    write!(f, ",sym={sym}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for Provenance {
    type Err = AffinityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| AffinityError::Spec {
            spec: s.to_owned(),
            reason: reason.to_owned(),
        };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(open) = text.find('(') else {
            return Ok(Provenance::single(text.parse()?));
        };
        if !text.ends_with(')') {
            return Err(bad("missing closing parenthesis"));
        }
        let name = &text[..open];
        let args: Vec<&str> = text[open + 1..text.len() - 1].split(',').collect();

        let mut positional = Vec::new();
        let mut alpha = None;
        let mut beta = None;
        let mut sym = None;
        for arg in args {
            match arg.split_once('=') {
                None => positional.push(arg),
                Some((key, value)) => {
                    let number = || value.parse::<f64>().map_err(|_| bad(&format!("{key} is not a number")));
                    match key {
                        "alpha" => alpha = Some(number()?),
                        "beta" => beta = Some(number()?),
                        "sym" => sym = Some(value.parse()?),
                        _ => return Err(bad(&format!("unknown argument `{key}`"))),
                    }
                }
            }
        }

        match name {
            "combine" => {
                let [first, second] = positional.as_slice() else {
                    return Err(bad("combine takes exactly two affinity functions"));
                };
                let (Some(alpha), Some(beta)) = (alpha, beta) else {
                    return Err(bad("combine needs alpha= and beta="));
                };
                Ok(Provenance {
                    spec: AffinitySpec::Combine {
                        first: first.parse()?,
                        second: second.parse()?,
                        params: CombinationParams::new(alpha, beta)?,
                    },
                    sym,
                })
            }
            func => {
                if !positional.iter().all(|p| p.is_empty()) || alpha.is_some() || beta.is_some() {
                    return Err(bad("a single affinity function only accepts sym="));
                }
                Ok(Provenance {
                    spec: AffinitySpec::Single(func.parse()?),
                    sym,
                })
            }
        }
    }
}

/// Dense `n x n` affinity values in `[0, 1]` with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    n: usize,
    values: Vec<f64>,
    provenance: Provenance,
}

impl AffinityMatrix {
    fn zeros(n: usize, provenance: Provenance) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
            provenance,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[x * self.n + y]
    }

    fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[x * self.n + y] = v;
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.values[x * self.n..(x + 1) * self.n]
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// First `(x, y)` with `F(x, y) != F(y, x)`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (x + 1..self.n).map(move |y| (x, y)))
            .find(|&(x, y)| self.get(x, y) != self.get(y, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    /// Count of off-diagonal entries above zero, as a fraction of `n(n-1)`.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let nonzero = self.values.iter().filter(|&&v| v > 0.0).count();
        nonzero as f64 / (self.n * (self.n - 1)) as f64
    }

    /// Full dense CSV, one row per line, optionally preceded by a header row
    /// of node labels.
    pub fn to_csv(&self, header: Option<&[String]>) -> String {
        let mut out = String::new();
        if let Some(labels) = header {
            out.push_str(&labels.join(","));
            out.push('\n');
        }
        for x in 0..self.n {
            let row: Vec<String> = self.row(x).iter().map(f64::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn strengths(g: &WeightedGraph) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| g.neighbors(v).iter().map(|&(_, w)| w).sum())
        .collect()
}

fn warn_isolated(name: &str, strengths: &[f64]) {
    let isolated = strengths.iter().filter(|&&s| s == 0.0).count();
    if isolated > 0 {
        log::warn!("{name}: {isolated} node(s) with zero strength get all-zero rows");
    }
}

/// `F(x, y) = C(x, y) / sum_a C(x, a)`.
pub fn best_friend(g: &WeightedGraph) -> AffinityMatrix {
    let n = g.node_count();
    let s = strengths(g);
    warn_isolated("best friend", &s);
    let mut f = AffinityMatrix::zeros(n, Provenance::single(AffinityFn::BestFriend));
    for x in 0..n {
        if s[x] == 0.0 {
            continue;
        }
        for &(y, w) in g.neighbors(x) {
            f.set(x, y, w / s[x]);
        }
    }
    f
}

/// `F(x, y) = max_a min(C(x, a), C(y, a)) / sum_a C(x, a)`.
pub fn best_common_friend(g: &WeightedGraph) -> AffinityMatrix {
    let n = g.node_count();
    let s = strengths(g);
    warn_isolated("best common friend", &s);
    let mut f = AffinityMatrix::zeros(n, Provenance::single(AffinityFn::BestCommonFriend));
    // Only common neighbors `a` give a nonzero min, so walk x -> a -> y.
    let mut best = vec![0.0f64; n];
    for x in 0..n {
        if s[x] == 0.0 {
            continue;
        }
        best.iter_mut().for_each(|b| *b = 0.0);
        for &(a, wxa) in g.neighbors(x) {
            for &(y, way) in g.neighbors(a) {
                let m = wxa.min(way);
                if m > best[y] {
                    best[y] = m;
                }
            }
        }
        for y in 0..n {
            if y != x && best[y] > 0.0 {
                f.set(x, y, best[y] / s[x]);
            }
        }
    }
    f
}

/// `F(x, y) = 1 - |I_x - I_y| / max(I_x, I_y)` where `I_a` sums the
/// centrality of the neighbors of `a`. Two empty neighborhoods give 1.
pub fn machiavelli(g: &WeightedGraph, degree: DegreeMode) -> AffinityMatrix {
    let n = g.node_count();
    let centrality: Vec<f64> = match degree {
        DegreeMode::Degree => (0..n).map(|v| g.neighbors(v).len() as f64).collect(),
        DegreeMode::Strength => strengths(g),
    };
    let influence: Vec<f64> = (0..n)
        .map(|a| g.neighbors(a).iter().map(|&(z, _)| centrality[z]).sum())
        .collect();
    let mut f = AffinityMatrix::zeros(n, Provenance::single(AffinityFn::Machiavelli));
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let (ix, iy) = (influence[x], influence[y]);
            let hi = ix.max(iy);
            let v = if hi == 0.0 { 1.0 } else { 1.0 - (ix - iy).abs() / hi };
            f.set(x, y, v);
        }
    }
    f
}

/// Entrywise `alpha * f1 + beta * f2`.
pub fn combine(
    f1: &AffinityMatrix,
    f2: &AffinityMatrix,
    params: CombinationParams,
) -> Result<AffinityMatrix, AffinityError> {
    if f1.n != f2.n {
        return Err(AffinityError::Shape(f1.n, f2.n));
    }
    let (first, second) = match (f1.provenance.spec, f2.provenance.spec) {
        (AffinitySpec::Single(a), AffinitySpec::Single(b)) => (a, b),
        _ => {
            return Err(AffinityError::Spec {
                spec: format!("{} / {}", f1.provenance, f2.provenance),
                reason: "only single affinity functions can be combined".into(),
            })
        }
    };
    let values = f1
        .values
        .iter()
        .zip(&f2.values)
        .map(|(&a, &b)| (params.alpha * a + params.beta * b).min(1.0))
        .collect();
    Ok(AffinityMatrix {
        n: f1.n,
        values,
        provenance: Provenance {
            spec: AffinitySpec::Combine {
                first,
                second,
                params,
            },
            sym: None,
        },
    })
}

/// `out(x, y) = out(y, x) = strategy(F(x, y), F(y, x))`.
pub fn symmetrize(f: &AffinityMatrix, strategy: Symmetrization) -> AffinityMatrix {
    let n = f.n;
    let mut out = AffinityMatrix::zeros(n, f.provenance.with_sym(strategy));
    for x in 0..n {
        for y in x + 1..n {
            let v = strategy.apply(f.get(x, y), f.get(y, x));
            out.set(x, y, v);
            out.set(y, x, v);
        }
    }
    out
}

/// Undirected graph over the nodes of `nodes` with an edge `(x, y, F(x, y))`
/// for every pair above `threshold`.
pub fn affinity_to_graph(
    f: &AffinityMatrix,
    nodes: &WeightedGraph,
    threshold: f64,
) -> Result<WeightedGraph, AffinityError> {
    if f.n != nodes.node_count() {
        return Err(AffinityError::Shape(f.n, nodes.node_count()));
    }
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(AffinityError::Threshold(threshold));
    }
    if let Some((x, y)) = f.asymmetry() {
        return Err(AffinityError::Asymmetric(x, y));
    }
    let mut b = GraphBuilder::with_nodes_of(nodes);
    for x in 0..f.n {
        for y in x + 1..f.n {
            let v = f.get(x, y);
            if v > threshold {
                b.add_edge(x, y, v).expect("positive weight between known nodes");
            }
        }
    }
    Ok(b.build())
}

/// Evaluates a provenance descriptor on `g`.
pub fn build(g: &WeightedGraph, p: &Provenance, degree: DegreeMode) -> Result<AffinityMatrix, AffinityError> {
    let raw = match p.spec {
        AffinitySpec::Single(func) => func.compute(g, degree),
        AffinitySpec::Combine {
            first,
            second,
            params,
        } => combine(&first.compute(g, degree), &second.compute(g, degree), params)?,
    };
    Ok(match p.sym {
        Some(sym) => symmetrize(&raw, sym),
        None => raw,
    })
}
