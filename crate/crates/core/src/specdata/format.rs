//! The dataset text format.
//!
//! ```text
//! # comment
//! [constants]
//! b_rot = 1.17314e-2 cm-1
//! r2.ground = 42
//!
//! [atom.excited.levels]
//! label = 6P
//! n = 6
//! l = 1
//! energy = 11547.63 cm-1
//!
//! [atom.excited.transitions]
//! from = 6P
//! to = 6S
//! radial = 5.50
//!
//! [molecule.polarizability]
//! kind = transitions
//!
//! delta_e = 0.045 au
//! dipole = 4.97
//! orientation = parallel
//!
//! [core]
//! kind = constant
//! alpha = 15.4
//!
//! [states]
//! atom = excited
//! symmetry = Sigma+
//! j = 0
//! ell = 1
//! c5 = 0
//! row = 0 0 1.0
//! ```
//!
//! A record is a block of `key = value` lines; blank lines separate records.
//! Arrays are whitespace separated. Every energy carries its unit (`au` or
//! `cm-1`) as the last token.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::model::*;
use crate::error::{Error, Result};
use crate::units::EnergyUnit;

/// `(from, to, radial, line)` awaiting level resolution.
type PendingTransition = (String, String, f64, usize);

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Record {
    line: usize,
    entries: Vec<Entry>,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    records: Vec<Record>,
}

struct Parser<'a> {
    path: &'a Path,
}

impl<'a> Parser<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    fn sections(&self, text: &str) -> Result<Vec<Section>> {
        let mut sections: Vec<Section> = Vec::new();
        let mut current: Option<Record> = None;

        let flush = |sections: &mut Vec<Section>, current: &mut Option<Record>| {
            if let (Some(rec), Some(sec)) = (current.take(), sections.last_mut()) {
                sec.records.push(rec);
            }
        };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                flush(&mut sections, &mut current);
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| self.err(line_no, format!("unterminated section header '{line}'")))?;
                flush(&mut sections, &mut current);
                sections.push(Section {
                    name: name.trim().to_string(),
                    line: line_no,
                    records: Vec::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| self.err(line_no, format!("expected 'key = value', found '{line}'")))?;
            if sections.is_empty() {
                return Err(self.err(line_no, "entry outside of any section"));
            }
            let entry = Entry {
                key: key.trim().to_string(),
                value: value.trim().to_string(),
                line: line_no,
            };
            current
                .get_or_insert_with(|| Record {
                    line: line_no,
                    entries: Vec::new(),
                })
                .entries
                .push(entry);
        }
        flush(&mut sections, &mut current);
        Ok(sections)
    }

    fn get<'r>(&self, rec: &'r Record, key: &str) -> Result<&'r Entry> {
        rec.entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| self.err(rec.line, format!("missing field '{key}'")))
    }

    fn opt<'r>(&self, rec: &'r Record, key: &str) -> Option<&'r Entry> {
        rec.entries.iter().find(|e| e.key == key)
    }

    fn parse<T: FromStr>(&self, e: &Entry) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        e.value
            .parse::<T>()
            .map_err(|err| self.err(e.line, format!("field '{}': {err}", e.key)))
    }

    fn field<T: FromStr>(&self, rec: &Record, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(self.get(rec, key)?)
    }

    fn energy(&self, e: &Entry) -> Result<f64> {
        let values = self.energy_array(e)?;
        match values.as_slice() {
            [v] => Ok(*v),
            _ => Err(self.err(e.line, format!("field '{}': expected a single value and a unit", e.key))),
        }
    }

    fn energy_array(&self, e: &Entry) -> Result<Vec<f64>> {
        let mut tokens: Vec<&str> = e.value.split_whitespace().collect();
        let unit_token = tokens
            .pop()
            .ok_or_else(|| self.err(e.line, format!("field '{}' is empty", e.key)))?;
        let unit: EnergyUnit = unit_token.parse().map_err(|m: String| {
            self.err(e.line, format!("field '{}': {m}; every energy needs an explicit unit", e.key))
        })?;
        tokens
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map(|v| unit.to_hartree(v))
                    .map_err(|err| self.err(e.line, format!("field '{}': '{t}': {err}", e.key)))
            })
            .collect()
    }

    fn array(&self, e: &Entry) -> Result<Vec<f64>> {
        e.value
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|err| self.err(e.line, format!("field '{}': '{t}': {err}", e.key)))
            })
            .collect()
    }

    fn merged(&self, sec: &Section) -> Record {
        Record {
            line: sec.line,
            entries: sec.records.iter().flat_map(|r| r.entries.iter().cloned()).collect(),
        }
    }
}

/// Parses dataset text without validating physics invariants.
pub fn parse_dataset(text: &str, path: &Path) -> Result<Dataset> {
    let p = Parser { path };
    let sections = p.sections(text)?;

    let mut b_rot = None;
    let mut r2 = BTreeMap::new();
    let mut levels: BTreeMap<String, (usize, Vec<AtomicLevel>)> = BTreeMap::new();
    let mut transitions: BTreeMap<String, (usize, Vec<PendingTransition>)> = BTreeMap::new();
    let mut molecule = None;
    let mut core = None;
    let mut states = Vec::new();

    for sec in &sections {
        let parts: Vec<&str> = sec.name.split('.').collect();
        match parts.as_slice() {
            ["constants"] => {
                let rec = p.merged(sec);
                for e in &rec.entries {
                    if e.key == "b_rot" {
                        b_rot = Some(p.energy(e)?);
                    } else if let Some(name) = e.key.strip_prefix("r2.") {
                        r2.insert(name.to_string(), p.parse::<f64>(e)?);
                    } else {
                        return Err(p.err(e.line, format!("unknown constant '{}'", e.key)));
                    }
                }
            }
            ["atom", name, "levels"] => {
                let slot = levels.entry(name.to_string()).or_insert((sec.line, Vec::new()));
                for rec in &sec.records {
                    slot.1.push(AtomicLevel {
                        label: p.get(rec, "label")?.value.clone(),
                        n: p.field(rec, "n")?,
                        l: p.field(rec, "l")?,
                        energy: p.energy(p.get(rec, "energy")?)?,
                    });
                }
            }
            ["atom", name, "transitions"] => {
                let slot = transitions.entry(name.to_string()).or_insert((sec.line, Vec::new()));
                for rec in &sec.records {
                    slot.1.push((
                        p.get(rec, "from")?.value.clone(),
                        p.get(rec, "to")?.value.clone(),
                        p.field(rec, "radial")?,
                        rec.line,
                    ));
                }
            }
            ["molecule", "polarizability"] => molecule = Some(parse_molecule(&p, sec)?),
            ["core"] => core = Some(parse_core(&p, &p.merged(sec))?),
            ["states"] => {
                for rec in &sec.records {
                    states.push(parse_state(&p, rec)?);
                }
            }
            _ => return Err(p.err(sec.line, format!("unknown section [{}]", sec.name))),
        }
    }

    let mut atoms: BTreeMap<String, AtomData> = BTreeMap::new();
    for (name, (line, lv)) in &levels {
        let (_, trs) = transitions.get(name).cloned().unwrap_or((*line, Vec::new()));
        let initial = trs
            .first()
            .map(|t| t.0.clone())
            .ok_or_else(|| p.err(*line, format!("atom '{name}' has no transitions")))?;
        let l = lv
            .iter()
            .find(|l| l.label == initial)
            .map(|l| l.l)
            .ok_or_else(|| p.err(*line, format!("atom '{name}': initial level '{initial}' is not in the level table")))?;
        let mut built = Vec::new();
        for (from, to, radial, tline) in trs {
            let lookup = |label: &str| {
                lv.iter()
                    .find(|l| l.label == label)
                    .ok_or_else(|| p.err(tline, format!("atom '{name}': unknown level '{label}'")))
            };
            built.push(AtomicTransition::between(lookup(&from)?, lookup(&to)?, radial));
        }
        atoms.insert(
            name.clone(),
            AtomData {
                levels: lv.clone(),
                initial,
                transitions: AtomicTransitionSet::new(l, built),
            },
        );
    }
    if let Some(name) = transitions.keys().find(|k| !levels.contains_key(*k)) {
        return Err(p.err(transitions[name].0, format!("atom '{name}' has transitions but no level table")));
    }
    if let Some(name) = atoms.keys().find(|k| k.parse::<AtomKind>().is_err()) {
        return Err(p.err(levels[name].0, format!("atom name '{name}' must be 'ground' or 'excited'")));
    }

    Ok(Dataset {
        ground: atoms.remove("ground"),
        excited: atoms.remove("excited"),
        molecule: molecule.ok_or_else(|| p.err(1, "missing [molecule.polarizability] section"))?,
        core: core.unwrap_or_default(),
        states,
        b_rot: b_rot.ok_or_else(|| p.err(1, "missing b_rot in [constants]"))?,
        r2,
    })
}

fn parse_molecule(p: &Parser, sec: &Section) -> Result<MolecularPolarizabilitySource> {
    let first = sec
        .records
        .first()
        .ok_or_else(|| p.err(sec.line, "empty [molecule.polarizability] section"))?;
    let kind = &p.get(first, "kind")?.value;
    match kind.as_str() {
        "transitions" => {
            let mut list = Vec::new();
            for rec in &sec.records {
                let Some(e) = p.opt(rec, "delta_e") else {
                    continue;
                };
                list.push(MolecularTransition {
                    delta_e: p.energy(e)?,
                    dipole: p.field(rec, "dipole")?,
                    orientation: p.field(rec, "orientation")?,
                });
            }
            Ok(MolecularPolarizabilitySource::TransitionList(list))
        }
        "grid" => {
            let rec = p.merged(sec);
            Ok(MolecularPolarizabilitySource::Grid(PolarizabilityGrid {
                omega: p.energy_array(p.get(&rec, "omega")?)?,
                par: p.array(p.get(&rec, "par")?)?,
                perp: p.array(p.get(&rec, "perp")?)?,
            }))
        }
        other => Err(p.err(first.line, format!("unknown polarizability kind '{other}'"))),
    }
}

fn parse_core(p: &Parser, rec: &Record) -> Result<CoreModel> {
    let kind = &p.get(rec, "kind")?.value;
    match kind.as_str() {
        "constant" => Ok(CoreModel::Constant {
            alpha: p.field(rec, "alpha")?,
        }),
        "effective" => Ok(CoreModel::EffectiveTransition {
            delta_e: p.energy(p.get(rec, "delta_e")?)?,
            strength: p.field(rec, "strength")?,
        }),
        other => Err(p.err(rec.line, format!("unknown core kind '{other}'"))),
    }
}

fn parse_state(p: &Parser, rec: &Record) -> Result<SymmetryState> {
    let mut rows = Vec::new();
    for e in rec.entries.iter().filter(|e| e.key == "row") {
        let t: Vec<&str> = e.value.split_whitespace().collect();
        let [mj, lambda, c] = t.as_slice() else {
            return Err(p.err(e.line, "row needs three values: mj lambda c"));
        };
        let bad = |what: &str| p.err(e.line, format!("row: invalid {what}"));
        rows.push(StateRow {
            mj: mj.parse().map_err(|_| bad("mj"))?,
            lambda: lambda.parse().map_err(|_| bad("lambda"))?,
            c: c.parse().map_err(|_| bad("coefficient"))?,
        });
    }
    Ok(SymmetryState {
        label: p.field(rec, "symmetry")?,
        atom: match p.opt(rec, "atom") {
            Some(e) => p.parse(e)?,
            None => AtomKind::Excited,
        },
        j: p.field(rec, "j")?,
        ell: p.field(rec, "ell")?,
        rows,
        c5: p.field(rec, "c5")?,
    })
}

fn fmt_f(x: f64) -> String {
    // Shortest representation that round-trips exactly.
    format!("{x:?}")
}

/// Writes a dataset back to text. Energies are written in hartree, so a
/// `parse -> serialize -> parse` cycle is exact.
pub fn serialize_dataset(d: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[constants]");
    let _ = writeln!(out, "b_rot = {} au", fmt_f(d.b_rot));
    for (k, v) in &d.r2 {
        let _ = writeln!(out, "r2.{k} = {}", fmt_f(*v));
    }
    for (kind, atom) in [(AtomKind::Ground, &d.ground), (AtomKind::Excited, &d.excited)] {
        let Some(atom) = atom else { continue };
        let _ = writeln!(out, "\n[atom.{kind}.levels]");
        for (i, l) in atom.levels.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "label = {}\nn = {}\nl = {}\nenergy = {} au", l.label, l.n, l.l, fmt_f(l.energy));
        }
        let _ = writeln!(out, "\n[atom.{kind}.transitions]");
        for (i, t) in atom.transitions.transitions.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "from = {}\nto = {}\nradial = {}", t.from, t.to, fmt_f(t.radial));
        }
    }
    let _ = writeln!(out, "\n[molecule.polarizability]");
    match &d.molecule {
        MolecularPolarizabilitySource::TransitionList(list) => {
            let _ = writeln!(out, "kind = transitions");
            for t in list {
                let _ = writeln!(
                    out,
                    "\ndelta_e = {} au\ndipole = {}\norientation = {}",
                    fmt_f(t.delta_e),
                    fmt_f(t.dipole),
                    t.orientation
                );
            }
        }
        MolecularPolarizabilitySource::Grid(g) => {
            let join = |v: &[f64]| v.iter().map(|x| fmt_f(*x)).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "kind = grid");
            let _ = writeln!(out, "omega = {} au", join(&g.omega));
            let _ = writeln!(out, "par = {}", join(&g.par));
            let _ = writeln!(out, "perp = {}", join(&g.perp));
        }
    }
    let _ = writeln!(out, "\n[core]");
    match &d.core {
        CoreModel::Constant { alpha } => {
            let _ = writeln!(out, "kind = constant\nalpha = {}", fmt_f(*alpha));
        }
        CoreModel::EffectiveTransition { delta_e, strength } => {
            let _ = writeln!(
                out,
                "kind = effective\ndelta_e = {} au\nstrength = {}",
                fmt_f(*delta_e),
                fmt_f(*strength)
            );
        }
    }
    if !d.states.is_empty() {
        let _ = writeln!(out, "\n[states]");
        for (i, s) in d.states.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(
                out,
                "atom = {}\nsymmetry = {}\nj = {}\nell = {}\nc5 = {}",
                s.atom,
                s.label,
                s.j,
                s.ell,
                fmt_f(s.c5)
            );
            for r in &s.rows {
                let _ = writeln!(out, "row = {} {} {}", r.mj, r.lambda, fmt_f(r.c));
            }
        }
    }
    out
}

/// Reads and parses a dataset file (no validation).
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })?;
    parse_dataset(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parser() -> Parser<'static> {
        Parser { path: Path::new("t.vdw") }
    }

    #[test]
    fn sections_split_records_on_blank_lines() {
        let text = "# comment\n[a]\nx = 1\ny = 2\n\nx = 3\n\n[b]\n  z = 4  \n";
        let secs = parser().sections(text).unwrap();
        assert_eq!(secs.len(), 2);
        assert_eq!(secs[0].name, "a");
        assert_eq!(secs[0].records.len(), 2);
        assert_eq!(secs[0].records[1].entries[0].line, 6);
        assert_eq!(secs[1].records[0].entries[0].value, "4");
    }

    #[test]
    fn malformed_lines_report_their_position() {
        for (text, line) in [("x = 1\n", 1), ("[a]\n\nnot a pair\n", 3), ("[a\n", 1)] {
            match parser().sections(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn energies_need_units() {
        let p = parser();
        let entry = |v: &str| Entry {
            key: "e".into(),
            value: v.into(),
            line: 4,
        };
        assert_eq!(p.energy(&entry("0.25 au")).unwrap(), 0.25);
        assert!((p.energy(&entry("219474.63137 cm-1")).unwrap() - 1.0).abs() < 1e-12);
        assert!(p.energy(&entry("0.25")).is_err());
        assert!(p.energy(&entry("0.1 0.2 au")).is_err());
        assert_eq!(p.energy_array(&entry("0 1 2 au")).unwrap(), vec![0.0, 1.0, 2.0]);
        assert!(p.array(&entry("1 x 3")).is_err());
    }

    #[test]
    fn floats_are_written_exactly() {
        for x in [0.1, 1.0 / 3.0, 5.34523e-8, -42704.0, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f(x).parse::<f64>().unwrap(), x);
        }
    }
}
