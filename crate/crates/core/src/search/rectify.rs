use std::fmt;
use std::str::FromStr;

/// Additive rectification `r_h(n, s) = h(s) + r(n)`. Each penalty has
/// `r(0) = 0` and is strictly increasing in `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rectifier {
    Linear,
    Quadratic,
    Logarithmic,
}

impl Rectifier {
    pub fn penalty(self, n: u64) -> f64 {
        let n = n as f64;
        match self {
            Rectifier::Linear => n,
            Rectifier::Quadratic => n * n,
            Rectifier::Logarithmic => n.ln_1p(),
        }
    }

    /// `r_h(n, s)` for a state with heuristic value `h`.
    pub fn rectify(self, h: f64, n: u64) -> f64 {
        h + self.penalty(n)
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Rectifier::Linear => "lin",
            Rectifier::Quadratic => "qua",
            Rectifier::Logarithmic => "log",
        }
    }
}

impl fmt::Display for Rectifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Rectifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lin" | "linear" => Ok(Rectifier::Linear),
            "qua" | "quadratic" => Ok(Rectifier::Quadratic),
            "log" | "logarithmic" => Ok(Rectifier::Logarithmic),
            other => Err(format!("unknown rectifier `{other}` (expected lin, qua or log)")),
        }
    }
}

/// Node evaluation criterion: `f = r_h` (greedy, S-G) or `f = g + r_h`
/// (additive, S-A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalMode {
    Greedy,
    Additive,
}

impl EvalMode {
    pub fn short_name(self) -> &'static str {
        match self {
            EvalMode::Greedy => "sg",
            EvalMode::Additive => "sa",
        }
    }
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sg" | "s-g" | "greedy" => Ok(EvalMode::Greedy),
            "sa" | "s-a" | "additive" => Ok(EvalMode::Additive),
            other => Err(format!("unknown evaluation mode `{other}` (expected sg or sa)")),
        }
    }
}

/// f-value of a node with cost `g`, heuristic `h` and `n` partial expansions.
pub fn nec(mode: EvalMode, rect: Rectifier, g: f64, h: f64, n: u64) -> f64 {
    match mode {
        EvalMode::Greedy => rect.rectify(h, n),
        EvalMode::Additive => g + rect.rectify(h, n),
    }
}
