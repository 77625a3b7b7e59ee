#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// Admissibility of right data.
    ARight,
    /// Admissibility of left data.
    ALeft,
    /// Compatibility of right data with a coefficient `D(rho)`.
    B,
}

impl ConditionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::ARight => "A+",
            ConditionKind::ALeft => "A-",
            ConditionKind::B => "B",
        }
    }
}

/// One measured check. `passed` compares `measured` against `tolerance` in the
/// direction documented by the check; non-gating items are diagnostics.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub gating: bool,
}

impl CheckItem {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        CheckItem { name: name.into(), passed: measured <= tolerance, measured, tolerance, gating: true }
    }

    /// Passes when `measured >= tolerance`.
    pub fn at_least(name: &str, measured: f64, tolerance: f64) -> Self {
        CheckItem { name: name.into(), passed: measured >= tolerance, measured, tolerance, gating: true }
    }

    pub fn info(name: &str, measured: f64) -> Self {
        CheckItem { name: name.into(), passed: true, measured, tolerance: f64::NAN, gating: false }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub kind: ConditionKind,
    pub items: Vec<CheckItem>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.items.iter().filter(|i| i.gating).all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| i.gating && !i.passed).collect()
    }
}
