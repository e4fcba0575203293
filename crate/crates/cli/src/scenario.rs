//! Scenario assembly: the one bag of settings every task runs from, built
//! either from command-line flags or from a line-oriented `key=value` file.

use fir_core::space::{build_cayley_ball, SpaceOracle, DEFAULT_VERTEX_CAP};
use fir_core::{Alphabet, Domain, Error, Result, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Task {
    Reduce,
    IdealBasis,
    SubmoduleBasis,
    GeFactor,
    BassDescent,
    CheckHypothesis,
    Delta,
    Displacement,
    AuditLemmas,
    Replay,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Reduce => "reduce",
            Task::IdealBasis => "ideal-basis",
            Task::SubmoduleBasis => "submodule-basis",
            Task::GeFactor => "ge-factor",
            Task::BassDescent => "bass-descent",
            Task::CheckHypothesis => "check-hypothesis",
            Task::Delta => "delta",
            Task::Displacement => "displacement",
            Task::AuditLemmas => "audit-lemmas",
            Task::Replay => "replay",
        }
    }

    pub fn parse(name: &str) -> Result<Task> {
        Ok(match name {
            "reduce" => Task::Reduce,
            "ideal-basis" => Task::IdealBasis,
            "submodule-basis" => Task::SubmoduleBasis,
            "ge-factor" => Task::GeFactor,
            "bass-descent" => Task::BassDescent,
            "check-hypothesis" => Task::CheckHypothesis,
            "delta" => Task::Delta,
            "displacement" => Task::Displacement,
            "audit-lemmas" => Task::AuditLemmas,
            "replay" => Task::Replay,
            other => return Err(Error::Precondition(format!("unknown task {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub task: Task,
    pub rank: u8,
    pub oracle_kind: String,
    pub extra: Vec<String>,
    pub radius: usize,
    pub vertex_cap: usize,
    pub domain_spec: String,
    pub rmax: usize,
    pub seed: u64,
    pub trials: u64,
    pub unsafe_mode: bool,
    pub gball: usize,
    pub n: u32,
    pub xi: String,
    pub alpha: String,
    pub gens: String,
    pub matrix_x: String,
    pub matrix_a: String,
    pub log_text: String,
    pub input: String,
    pub identity: usize,
    pub primes: Vec<u32>,
    pub emit_edges: bool,
}

impl Scenario {
    pub fn new(task: Task) -> Scenario {
        Scenario {
            task,
            rank: 2,
            oracle_kind: "tree".into(),
            extra: Vec::new(),
            radius: 6,
            vertex_cap: DEFAULT_VERTEX_CAP,
            domain_spec: "q".into(),
            rmax: 6,
            seed: 42,
            trials: 100,
            unsafe_mode: false,
            gball: 3,
            n: 2,
            xi: String::new(),
            alpha: String::new(),
            gens: String::new(),
            matrix_x: String::new(),
            matrix_a: String::new(),
            log_text: String::new(),
            input: String::new(),
            identity: 0,
            primes: vec![2, 3, 5],
            emit_edges: false,
        }
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.rank)
    }

    pub fn domain(&self) -> Result<Domain> {
        match self.domain_spec.as_str() {
            "q" => Ok(Domain::Rational),
            "z" => Ok(Domain::Integer),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Precondition(format!("unknown domain {other:?} (use q, z, or fp:<p>)")))?;
                let p: u32 = p
                    .parse()
                    .map_err(|_| Error::Precondition(format!("bad prime in domain {other:?}")))?;
                Domain::fp(p)
            }
        }
    }

    pub fn oracle(&self) -> Result<SpaceOracle> {
        let alphabet = self.alphabet()?;
        match self.oracle_kind.as_str() {
            "tree" => Ok(SpaceOracle::tree(alphabet)),
            "cayley-ball" => {
                let extra: Vec<Word> = self
                    .extra
                    .iter()
                    .map(|s| Word::parse(s, &alphabet))
                    .collect::<Result<_>>()?;
                build_cayley_ball(alphabet, &extra, self.radius, self.vertex_cap)
            }
            other => Err(Error::Precondition(format!(
                "unknown oracle {other:?} (use tree or cayley-ball)"
            ))),
        }
    }

    /// Parse a line-oriented `key=value` scenario file. `#` starts a comment.
    pub fn from_file_text(text: &str) -> Result<Scenario> {
        let mut task = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                pos: lineno + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim().to_string());
            if key == "task" {
                task = Some(Task::parse(&value)?);
            } else {
                pairs.push((key.to_string(), value));
            }
        }
        let task = task.ok_or_else(|| Error::Precondition("scenario file sets no task".into()))?;
        let mut sc = Scenario::new(task);
        for (key, value) in pairs {
            sc.set(&key, &value)?;
        }
        Ok(sc)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |k: &str, v: &str| Error::Precondition(format!("bad value {v:?} for {k}"));
        match key {
            "rank" => self.rank = value.parse().map_err(|_| bad(key, value))?,
            "oracle" => self.oracle_kind = value.to_string(),
            "extra" => {
                self.extra = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "radius" => self.radius = value.parse().map_err(|_| bad(key, value))?,
            "vertex-cap" => self.vertex_cap = value.parse().map_err(|_| bad(key, value))?,
            "domain" => self.domain_spec = value.to_string(),
            "rmax" => self.rmax = value.parse().map_err(|_| bad(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value))?,
            "trials" => self.trials = value.parse().map_err(|_| bad(key, value))?,
            "unsafe" => self.unsafe_mode = value.parse().map_err(|_| bad(key, value))?,
            "gball" => self.gball = value.parse().map_err(|_| bad(key, value))?,
            "n" => self.n = value.parse().map_err(|_| bad(key, value))?,
            "xi" => self.xi = value.to_string(),
            "alpha" => self.alpha = value.to_string(),
            "gens" => self.gens = value.to_string(),
            "x" => self.matrix_x = value.to_string(),
            "a" => self.matrix_a = value.to_string(),
            "log" => self.log_text = value.replace("\\n", "\n"),
            "input" => self.input = value.to_string(),
            "identity" => self.identity = value.parse().map_err(|_| bad(key, value))?,
            "emit-edges" => self.emit_edges = value.parse().map_err(|_| bad(key, value))?,
            "primes" => {
                self.primes = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad(key, value)))
                    .collect::<Result<_>>()?
            }
            other => return Err(Error::Precondition(format!("unknown scenario key {other:?}"))),
        }
        Ok(())
    }
}

/// Split a list on top-level commas, respecting parentheses, so both element
/// lists (`1+a, 1+b`) and vector lists (`(1; 0), (0; 1)`) parse uniformly.
pub fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_file_round_trip() {
        let text = "# worked reduction\ntask=reduce\nrank=2\ndomain=fp:2\nxi=1+a, 1+a+b+ba\nalpha=1+b, 1\nseed=7\n";
        let sc = Scenario::from_file_text(text).unwrap();
        assert_eq!(sc.task, Task::Reduce);
        assert_eq!(sc.domain().unwrap(), Domain::fp(2).unwrap());
        assert_eq!(sc.seed, 7);
        assert_eq!(split_top_level(&sc.xi), vec!["1+a", "1+a+b+ba"]);
    }

    #[test]
    fn top_level_split_respects_parens() {
        assert_eq!(split_top_level("(1; 0), (0, 1+b)"), vec!["(1; 0)", "(0, 1+b)"]);
        assert_eq!(split_top_level("1+a"), vec!["1+a"]);
        assert_eq!(split_top_level(""), Vec::<String>::new());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "task=delta\nbogus=1\n";
        assert!(Scenario::from_file_text(text).is_err());
    }
}
