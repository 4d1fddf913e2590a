use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// A bound level of the valence electron.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicLevel {
    pub label: String,
    pub n: i32,
    pub l: i32,
    /// Hartree.
    pub energy: f64,
}

/// One dipole transition `nl -> n'l'` out of the atom's initial level.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicTransition {
    pub from: String,
    pub to: String,
    pub l_from: i32,
    pub l_to: i32,
    /// `E_to - E_from`, hartree. Negative for downward transitions.
    pub delta_e: f64,
    /// Radial matrix element `<nl|r|n'l'>`, bohr.
    pub radial: f64,
}

impl AtomicTransition {
    pub fn new(l_from: i32, l_to: i32, delta_e: f64, radial: f64) -> Self {
        Self {
            from: format!("l={l_from}"),
            to: format!("l={l_to},dE={delta_e}"),
            l_from,
            l_to,
            delta_e,
            radial,
        }
    }

    pub fn between(from: &AtomicLevel, to: &AtomicLevel, radial: f64) -> Self {
        Self {
            from: from.label.clone(),
            to: to.label.clone(),
            l_from: from.l,
            l_to: to.l,
            delta_e: to.energy - from.energy,
            radial,
        }
    }

    pub fn is_downward(&self) -> bool {
        self.delta_e < 0.0
    }

    pub fn name(&self) -> String {
        format!("{} -> {}", self.from, self.to)
    }
}

/// All transitions out of one initial level of orbital momentum `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicTransitionSet {
    pub l: i32,
    pub transitions: Vec<AtomicTransition>,
}

impl AtomicTransitionSet {
    pub fn new(l: i32, transitions: Vec<AtomicTransition>) -> Self {
        Self { l, transitions }
    }

    pub fn upward(&self) -> impl Iterator<Item = &AtomicTransition> {
        self.transitions.iter().filter(|t| !t.is_downward())
    }

    pub fn downward(&self) -> impl Iterator<Item = &AtomicTransition> {
        self.transitions.iter().filter(|t| t.is_downward())
    }

    pub fn is_all_upward(&self) -> bool {
        self.transitions.iter().all(|t| !t.is_downward())
    }
}

/// An atom as stored in a dataset: its level table and the transitions out of
/// its initial level.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomData {
    pub levels: Vec<AtomicLevel>,
    /// Label of the initial level.
    pub initial: String,
    pub transitions: AtomicTransitionSet,
}

impl AtomData {
    pub fn level(&self, label: &str) -> Option<&AtomicLevel> {
        self.levels.iter().find(|l| l.label == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomKind {
    Ground,
    Excited,
}

impl AtomKind {
    pub fn name(self) -> &'static str {
        match self {
            AtomKind::Ground => "ground",
            AtomKind::Excited => "excited",
        }
    }
}

impl FromStr for AtomKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ground" => Ok(AtomKind::Ground),
            "excited" => Ok(AtomKind::Excited),
            other => Err(format!("unknown atom '{other}' (expected ground or excited)")),
        }
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Component of the dimer polarizability a transition feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Σ -> Σ, along the molecular axis.
    Parallel,
    /// Σ -> Π, across the molecular axis.
    Perpendicular,
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "parallel" | "par" => Ok(Orientation::Parallel),
            "perpendicular" | "perp" => Ok(Orientation::Perpendicular),
            other => Err(format!("unknown orientation '{other}'")),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Parallel => "parallel",
            Orientation::Perpendicular => "perpendicular",
        })
    }
}

/// A vibronic transition of the dimer. Each contributes
/// `2 ΔE μ² / (ΔE² - z²)` to its polarizability component.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularTransition {
    pub delta_e: f64,
    pub dipole: f64,
    pub orientation: Orientation,
}

/// Tabulated `α_∥(iω)`, `α_⊥(iω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizabilityGrid {
    pub omega: Vec<f64>,
    pub par: Vec<f64>,
    pub perp: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MolecularPolarizabilitySource {
    TransitionList(Vec<MolecularTransition>),
    Grid(PolarizabilityGrid),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoreModel {
    Constant { alpha: f64 },
    EffectiveTransition { delta_e: f64, strength: f64 },
}

impl Default for CoreModel {
    fn default() -> Self {
        CoreModel::Constant { alpha: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reflection {
    Plus,
    Minus,
    None,
}

/// `|m_J|` plus reflection parity, printed as Σ±, Π, Δ, Φ, Γ, H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymmetryLabel {
    pub m_total: i32,
    pub reflection: Reflection,
}

const SYMMETRY_NAMES: [(&str, &str); 6] = [
    ("Sigma", "Σ"),
    ("Pi", "Π"),
    ("Delta", "Δ"),
    ("Phi", "Φ"),
    ("Gamma", "Γ"),
    ("H", "H"),
];

impl SymmetryLabel {
    pub fn new(m_total: i32, reflection: Reflection) -> Self {
        Self { m_total, reflection }
    }

    pub fn greek(&self) -> String {
        let base = SYMMETRY_NAMES
            .get(self.m_total as usize)
            .map(|n| n.1.to_string())
            .unwrap_or_else(|| format!("mJ={}", self.m_total));
        base + self.reflection_suffix()
    }

    fn reflection_suffix(&self) -> &'static str {
        match self.reflection {
            Reflection::Plus => "+",
            Reflection::Minus => "-",
            Reflection::None => "",
        }
    }
}

impl fmt::Display for SymmetryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match SYMMETRY_NAMES.get(self.m_total as usize) {
            Some((ascii, _)) => write!(f, "{ascii}{}", self.reflection_suffix()),
            None => write!(f, "mJ={}{}", self.m_total, self.reflection_suffix()),
        }
    }
}

impl FromStr for SymmetryLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, reflection) = if let Some(b) = s.strip_suffix('+') {
            (b, Reflection::Plus)
        } else if let Some(b) = s.strip_suffix('-') {
            (b, Reflection::Minus)
        } else {
            (s, Reflection::None)
        };
        SYMMETRY_NAMES
            .iter()
            .position(|(ascii, greek)| *ascii == base || *greek == base)
            .map(|m| SymmetryLabel::new(m as i32, reflection))
            .ok_or_else(|| format!("unknown symmetry label '{s}'"))
    }
}

/// One `c · |m_j, λ>` term of a zeroth-order eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRow {
    pub mj: i32,
    pub lambda: i32,
    pub c: f64,
}

/// A zeroth-order eigenvector of the first-order interaction for a dimer in
/// rotational level `j`, together with its (ingested) C5.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryState {
    pub label: SymmetryLabel,
    pub atom: AtomKind,
    pub j: i32,
    pub ell: i32,
    pub rows: Vec<StateRow>,
    pub c5: f64,
}

impl SymmetryState {
    pub fn single(label: SymmetryLabel, atom: AtomKind, j: i32, ell: i32, mj: i32, lambda: i32, c5: f64) -> Self {
        Self {
            label,
            atom,
            j,
            ell,
            rows: vec![StateRow { mj, lambda, c: 1.0 }],
            c5,
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.rows.iter().map(|r| r.c * r.c).sum()
    }

    /// Same state with every projection sign-flipped.
    pub fn reflected(&self) -> Self {
        let mut s = self.clone();
        for r in &mut s.rows {
            r.mj = -r.mj;
            r.lambda = -r.lambda;
        }
        s
    }
}

/// Immutable bundle of every spectroscopic input.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ground: Option<AtomData>,
    pub excited: Option<AtomData>,
    pub molecule: MolecularPolarizabilitySource,
    pub core: CoreModel,
    pub states: Vec<SymmetryState>,
    /// Rotational constant of the dimer vibrational level, hartree.
    pub b_rot: f64,
    /// `<r²>` expectation values keyed by name (bohr²).
    pub r2: BTreeMap<String, f64>,
}

impl Dataset {
    pub fn atom(&self, kind: AtomKind) -> Option<&AtomData> {
        match kind {
            AtomKind::Ground => self.ground.as_ref(),
            AtomKind::Excited => self.excited.as_ref(),
        }
    }

    pub fn states_for(&self, kind: AtomKind) -> impl Iterator<Item = &SymmetryState> {
        self.states.iter().filter(move |s| s.atom == kind)
    }
}
