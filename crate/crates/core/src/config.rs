//! Plain-text run configuration.
//!
//! ```text
//! [deck]
//! L = 24.0            # m
//! m = 9.774 t/m
//! alpha_deg = 10
//! [train]
//! file = hslm_a1.txt
//! v = 190 km/h
//! [run]
//! dt = 0.001
//! ```
//!
//! Values may carry a unit suffix; everything is converted to SI on parse.
//! A bare number is read in SI, except `alpha_deg` which is in degrees.

use std::path::{Path, PathBuf};

use crate::deck::{DeckProperties, RunSettings};
use crate::error::{Error, Result};

/// Physical dimension of a config value; selects the accepted unit suffixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Pressure,
    AreaMoment,
    MassPerLength,
    Speed,
    Force,
    Time,
    Dimensionless,
}

impl Dimension {
    fn factor(self, unit: &str) -> Option<f64> {
        use Dimension::*;
        match (self, unit) {
            (_, "") => Some(1.0),
            (Length, "m") => Some(1.0),
            (Pressure, "N/m2" | "N/m²" | "Pa") => Some(1.0),
            (AreaMoment, "m4" | "m⁴") => Some(1.0),
            (MassPerLength, "kg/m") => Some(1.0),
            (MassPerLength, "t/m") => Some(1000.0),
            (Speed, "m/s") => Some(1.0),
            (Speed, "km/h") => Some(1.0 / 3.6),
            (Force, "N") => Some(1.0),
            (Force, "kN") => Some(1000.0),
            (Time, "s") => Some(1.0),
            _ => None,
        }
    }
}

/// Converts km/h to m/s.
pub fn kmh_to_ms(v: f64) -> f64 {
    v / 3.6
}

/// Converts m/s to km/h.
pub fn ms_to_kmh(v: f64) -> f64 {
    v * 3.6
}

fn split_number(text: &str) -> (&str, &str) {
    let text = text.trim();
    match text.find(|c: char| c.is_whitespace()) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => {
            // "22.5t/m": split at the first letter that cannot start an exponent
            let bytes = text.as_bytes();
            let mut end = text.len();
            for (i, c) in text.char_indices() {
                let exp = (c == 'e' || c == 'E')
                    && i > 0
                    && bytes
                        .get(i + 1)
                        .is_some_and(|b| b.is_ascii_digit() || *b == b'-' || *b == b'+');
                if !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+') || exp) {
                    end = i;
                    break;
                }
            }
            (&text[..end], text[end..].trim())
        }
    }
}

/// Parses `"<number> [unit]"` into SI.
pub fn parse_quantity(text: &str, dim: Dimension, line: usize) -> Result<f64> {
    let (num, unit) = split_number(text);
    let value: f64 = num
        .parse()
        .map_err(|_| Error::parse(line, format!("`{num}` is not a number")))?;
    let factor = dim
        .factor(unit)
        .ok_or_else(|| Error::parse(line, format!("unknown unit `{unit}` for a {dim:?} value")))?;
    // km/h is divided rather than multiplied by 1/3.6 so that `100 km/h` equals 100.0 / 3.6 exactly
    Ok(match (dim, unit) {
        (Dimension::Speed, "km/h") => kmh_to_ms(value),
        _ => value * factor,
    })
}

fn parse_angle(text: &str, line: usize) -> Result<f64> {
    let (num, unit) = split_number(text);
    let value: f64 = num
        .parse()
        .map_err(|_| Error::parse(line, format!("`{num}` is not a number")))?;
    match unit {
        "" | "deg" | "°" => Ok(value.to_radians()),
        "rad" => Ok(value),
        _ => Err(Error::parse(
            line,
            format!("unknown unit `{unit}` for an angle"),
        )),
    }
}

fn parse_count(text: &str, line: usize) -> Result<usize> {
    text.trim().parse().map_err(|_| {
        Error::parse(
            line,
            format!("`{}` is not a non-negative integer", text.trim()),
        )
    })
}

/// The `[train]` section. Speeds in m/s, loads in N.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainSection {
    /// Axle file; relative paths resolve against the config file's directory.
    pub file: Option<PathBuf>,
    /// Single moving load, used when no file is given.
    pub load: Option<f64>,
    pub speed: Option<f64>,
    pub eccentricity: f64,
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub v_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub deck: DeckProperties,
    pub train: TrainSection,
    pub run: RunSettings,
}

#[derive(Default)]
struct DeckFields {
    l: Option<f64>,
    e: Option<f64>,
    nu: Option<f64>,
    i: Option<f64>,
    j: Option<f64>,
    m: Option<f64>,
    r: Option<f64>,
    alpha: Option<f64>,
    xi: Option<f64>,
    xi_t: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Deck,
    Train,
    Run,
}

/// Names accepted in each section, for override validation.
pub const DECK_KEYS: &[&str] = &[
    "L",
    "E",
    "nu",
    "I",
    "J",
    "m",
    "r",
    "alpha_deg",
    "xi",
    "xi_t",
];
pub const TRAIN_KEYS: &[&str] = &["file", "P", "v", "e", "v_min", "v_max", "v_step"];
pub const RUN_KEYS: &[&str] = &["n_modes", "dt", "x_eval", "y_eval", "tail_time"];

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Replaces or appends `key = value` lines. Each override is `section.key=value`
/// or a bare `key=value` when the key name is unique across sections.
pub fn apply_overrides(text: &str, overrides: &[String]) -> Result<String> {
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    for ov in overrides {
        let (lhs, value) = ov
            .split_once('=')
            .ok_or_else(|| Error::validation("override", format!("`{ov}` is not key=value")))?;
        let lhs = lhs.trim();
        let (section, key) = match lhs.split_once('.') {
            Some((s, k)) => (s.to_owned(), k.to_owned()),
            None => {
                let section = [
                    ("deck", DECK_KEYS),
                    ("train", TRAIN_KEYS),
                    ("run", RUN_KEYS),
                ]
                .iter()
                .find(|(_, keys)| keys.contains(&lhs))
                .map(|(s, _)| *s)
                .ok_or_else(|| Error::validation("override", format!("unknown key `{lhs}`")))?;
                (section.to_owned(), lhs.to_owned())
            }
        };
        let known = match section.as_str() {
            "deck" => DECK_KEYS,
            "train" => TRAIN_KEYS,
            "run" => RUN_KEYS,
            _ => {
                return Err(Error::validation(
                    "override",
                    format!("unknown section `{section}`"),
                ))
            }
        };
        if !known.contains(&key.as_str()) {
            return Err(Error::validation(
                "override",
                format!("unknown key `{section}.{key}`"),
            ));
        }
        let header = format!("[{section}]");
        let new_line = format!("{key} = {}", value.trim());
        let start = lines.iter().position(|l| strip_comment(l) == header);
        match start {
            None => {
                lines.push(header);
                lines.push(new_line);
            }
            Some(s) => {
                let end = lines[s + 1..]
                    .iter()
                    .position(|l| strip_comment(l).starts_with('['))
                    .map_or(lines.len(), |p| s + 1 + p);
                let existing = (s + 1..end).find(|&i| {
                    strip_comment(&lines[i])
                        .split_once('=')
                        .is_some_and(|(k, _)| k.trim() == key)
                });
                match existing {
                    Some(i) => lines[i] = new_line,
                    None => lines.insert(end, new_line),
                }
            }
        }
    }
    Ok(lines.join("\n"))
}

/// Parses a full configuration.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut section = Section::None;
    let mut deck = DeckFields::default();
    let mut train = TrainSection::default();
    let mut run = RunSettings::default();
    let mut seen_deck = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "deck" => {
                    seen_deck = true;
                    Section::Deck
                }
                "train" => Section::Train,
                "run" => Section::Run,
                other => return Err(Error::parse(line, format!("unknown section `[{other}]`"))),
            };
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::parse(line, format!("expected `key = value`, got `{content}`"))
        })?;
        let key = key.trim();
        let value = value.trim();
        use Dimension::*;
        match section {
            Section::None => return Err(Error::parse(line, "key outside of any section")),
            Section::Deck => {
                let slot = match key {
                    "L" => (&mut deck.l, Length),
                    "E" => (&mut deck.e, Pressure),
                    "nu" => (&mut deck.nu, Dimensionless),
                    "I" => (&mut deck.i, AreaMoment),
                    "J" => (&mut deck.j, AreaMoment),
                    "m" => (&mut deck.m, MassPerLength),
                    "r" => (&mut deck.r, Length),
                    "xi" => (&mut deck.xi, Dimensionless),
                    "xi_t" => (&mut deck.xi_t, Dimensionless),
                    "alpha_deg" => {
                        deck.alpha = Some(parse_angle(value, line)?);
                        continue;
                    }
                    _ => return Err(Error::parse(line, format!("unknown deck key `{key}`"))),
                };
                *slot.0 = Some(parse_quantity(value, slot.1, line)?);
            }
            Section::Train => match key {
                "file" => train.file = Some(PathBuf::from(value)),
                "P" => train.load = Some(parse_quantity(value, Force, line)?),
                "v" => train.speed = Some(parse_quantity(value, Speed, line)?),
                "e" => train.eccentricity = parse_quantity(value, Length, line)?,
                "v_min" => train.v_min = Some(parse_quantity(value, Speed, line)?),
                "v_max" => train.v_max = Some(parse_quantity(value, Speed, line)?),
                "v_step" => train.v_step = Some(parse_quantity(value, Speed, line)?),
                _ => return Err(Error::parse(line, format!("unknown train key `{key}`"))),
            },
            Section::Run => match key {
                "n_modes" => run.n_modes = parse_count(value, line)?,
                "dt" => run.dt = parse_quantity(value, Time, line)?,
                "x_eval" => run.eval_position = Some(parse_quantity(value, Length, line)?),
                "y_eval" => run.lateral_offset = parse_quantity(value, Length, line)?,
                "tail_time" => run.tail_time = Some(parse_quantity(value, Time, line)?),
                _ => return Err(Error::parse(line, format!("unknown run key `{key}`"))),
            },
        }
    }
    if !seen_deck {
        return Err(Error::validation("deck", "missing [deck] section"));
    }
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::validation(name, "missing"));
    let deck = DeckProperties {
        span_length: need(deck.l, "L")?,
        elastic_modulus: need(deck.e, "E")?,
        poisson_ratio: need(deck.nu, "nu")?,
        second_moment: need(deck.i, "I")?,
        torsion_constant: need(deck.j, "J")?,
        mass_per_length: need(deck.m, "m")?,
        gyration_radius: need(deck.r, "r")?,
        skew_angle: need(deck.alpha, "alpha_deg")?,
        damping_ratio: need(deck.xi, "xi")?,
        torsional_damping_ratio: deck.xi_t.unwrap_or(0.0),
    };
    deck.validate()?;
    run.validate(&deck)?;
    Ok(Config { deck, train, run })
}

/// Parses the `[deck]` section of a configuration into SI deck properties.
pub fn parse_deck(text: &str) -> Result<DeckProperties> {
    parse_config(text).map(|c| c.deck)
}

/// Reads and parses a configuration file. A relative train file path is
/// resolved against the config's directory.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let text = apply_overrides(&text, overrides)?;
    let mut config = parse_config(&text)?;
    if let Some(file) = &config.train.file {
        if file.is_relative() {
            if let Some(dir) = path.parent() {
                config.train.file = Some(dir.join(file));
            }
        }
    }
    Ok(config)
}

fn format_angle(alpha: f64) -> String {
    let deg = alpha.to_degrees();
    if deg.to_radians() == alpha {
        format!("{deg}")
    } else {
        format!("{alpha} rad")
    }
}

/// Writes a `[deck]` section in SI units that parses back to identical values.
pub fn format_deck(deck: &DeckProperties) -> String {
    format!(
        "[deck]\nL = {}\nE = {}\nnu = {}\nI = {}\nJ = {}\nm = {}\nr = {}\nalpha_deg = {}\nxi = {}\nxi_t = {}\n",
        deck.span_length,
        deck.elastic_modulus,
        deck.poisson_ratio,
        deck.second_moment,
        deck.torsion_constant,
        deck.mass_per_length,
        deck.gyration_radius,
        format_angle(deck.skew_angle),
        deck.damping_ratio,
        deck.torsional_damping_ratio,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_1: &str = "\
[deck]
L = 15.0
E = 3.2e10 N/m2
nu = 0.25
I = 0.4987
J = 1.7067
m = 22.5 t/m     # slab
r = 0.2354
alpha_deg = 20
xi = 0.02
[train]
P = 170 kN
v = 100 km/h
";

    #[test]
    fn converts_units_to_si() {
        let c = parse_config(EXAMPLE_1).unwrap();
        assert_eq!(c.deck.mass_per_length, 22500.0);
        assert_eq!(c.train.load, Some(170000.0));
        assert_eq!(c.train.speed, Some(100.0 / 3.6));
        assert!((c.train.speed.unwrap() - 27.777_777_777_777_78).abs() < 1e-12);
        assert_eq!(c.deck.skew_angle, 20f64.to_radians());
        assert_eq!(c.deck.torsional_damping_ratio, 0.0);
        assert_eq!(c.run, RunSettings::default());
    }

    #[test]
    fn compact_suffixes() {
        assert_eq!(
            parse_quantity("22.5t/m", Dimension::MassPerLength, 1).unwrap(),
            22500.0
        );
        assert_eq!(
            parse_quantity("3.2e10", Dimension::Pressure, 1).unwrap(),
            3.2e10
        );
        assert_eq!(
            parse_quantity("170kN", Dimension::Force, 1).unwrap(),
            170000.0
        );
    }

    #[test]
    fn unknown_unit_reports_line() {
        let text = EXAMPLE_1.replace("22.5 t/m", "22.5 lb/ft");
        match parse_config(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
        // a known unit of the wrong dimension is just as unknown here
        let text = EXAMPLE_1.replace("v = 100 km/h", "v = 100 kN");
        assert!(matches!(
            parse_config(&text),
            Err(Error::Parse { line: 13, .. })
        ));
    }

    #[test]
    fn missing_and_unknown_keys() {
        let text = EXAMPLE_1.replace("r = 0.2354\n", "");
        assert!(
            matches!(parse_config(&text), Err(Error::Validation { field, .. }) if field == "r")
        );
        let text = EXAMPLE_1.replace("r = 0.2354", "rho = 0.2354");
        assert!(matches!(
            parse_config(&text),
            Err(Error::Parse { line: 8, .. })
        ));
    }

    #[test]
    fn overrides_replace_and_append() {
        let text =
            apply_overrides(EXAMPLE_1, &["alpha_deg=0".into(), "run.dt=0.0005".into()]).unwrap();
        let c = parse_config(&text).unwrap();
        assert_eq!(c.deck.skew_angle, 0.0);
        assert_eq!(c.run.dt, 0.0005);
        assert!(apply_overrides(EXAMPLE_1, &["colour=red".into()]).is_err());
        assert!(apply_overrides(EXAMPLE_1, &["deck.v=1".into()]).is_err());
    }

    #[test]
    fn format_round_trip_example() {
        let deck = parse_deck(EXAMPLE_1).unwrap();
        let again = parse_deck(&format_deck(&deck)).unwrap();
        assert_eq!(deck, again);
    }
}
