use serde::Serialize;

/// Counts cases checked and keeps the first few counterexamples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
    /// cases a bound stopped from being decided
    pub undecided: u64,
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 8;

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.checked += 1;
        self.failed += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness());
        }
    }

    pub fn undecided(&mut self, why: impl FnOnce() -> String) {
        self.checked += 1;
        self.undecided += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(why());
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(witness)
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.undecided += other.undecided;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Process exit status: 0, 1 or 2.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&Tally> for Verdict {
    fn from(t: &Tally) -> Self {
        if !t.ok() {
            Verdict::Fail
        } else if t.undecided > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}
