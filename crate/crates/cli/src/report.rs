//! Command reports: verdicts with labelled witnesses, rendered as text or
//! JSON. Timing is kept out of reports so they are byte-stable.

use std::fmt::Write as _;

use qlab_core::report::LawReport;
use qlab_core::Config;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIP")]
    Skip,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    /// Skipped hypothesis or failure context.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub max_carrier: usize,
    pub max_table_carrier: usize,
    pub max_triples: u64,
}

impl From<&Config> for ConfigEcho {
    fn from(c: &Config) -> Self {
        ConfigEcho {
            max_carrier: c.max_carrier,
            max_table_carrier: c.max_table_carrier,
            max_triples: c.max_triples,
        }
    }
}

/// A row of facts about one item, such as a projection's dossier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub item: String,
    pub facts: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: String,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Replayable instance files, for search hits.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, instance: impl Into<String>, cfg: &Config) -> Self {
        Report {
            command: command.into(),
            instance: instance.into(),
            config: cfg.into(),
            seed: None,
            verdicts: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
            instances: Vec::new(),
        }
    }

    pub fn push(&mut self, check: impl Into<String>, status: Status, witness: Vec<String>, reason: Option<String>) {
        self.verdicts.push(Verdict {
            check: check.into(),
            status,
            witness,
            reason,
        });
    }

    pub fn pass(&mut self, check: impl Into<String>) {
        self.push(check, Status::Pass, Vec::new(), None);
    }

    pub fn skip(&mut self, check: impl Into<String>, hypothesis: &str) {
        self.push(check, Status::Skip, Vec::new(), Some(hypothesis.to_string()));
    }

    /// One verdict per law, witnesses labelled by `label`.
    pub fn laws(&mut self, prefix: &str, r: &LawReport, label: impl Fn(usize) -> String) {
        for c in &r.checks {
            let name = if prefix.is_empty() {
                c.name.to_string()
            } else {
                format!("{prefix}{}", c.name)
            };
            match &c.witness {
                None => self.pass(name),
                Some(w) => self.push(name, Status::Fail, w.iter().map(|&a| label(a)).collect(), None),
            }
        }
    }

    /// Process exit status: 1 on any failure, 2 when every verdict is a skip.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            1
        } else if !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.status == Status::Skip) {
            2
        } else {
            0
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |s: Status| self.verdicts.iter().filter(|v| v.status == s).count();
        (count(Status::Pass), count(Status::Fail), count(Status::Skip))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.command, self.instance);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for v in &self.verdicts {
            let _ = write!(s, "{} {}", v.status.as_str(), v.check);
            if let Some(r) = &v.reason {
                let _ = write!(s, " ({r})");
            }
            if !v.witness.is_empty() {
                let _ = write!(s, " witness [{}]", v.witness.join(", "));
            }
            s.push('\n');
        }
        for r in &self.rows {
            let facts: Vec<String> = r.facts.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "  {}: {}", r.item, facts.join(" "));
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for i in &self.instances {
            s.push_str(i);
        }
        let (p, f, k) = self.counts();
        let _ = writeln!(s, "summary: {p} pass, {f} fail, {k} skip");
        s
    }
}
