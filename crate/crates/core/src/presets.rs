//! Bundled decks and trains.

use crate::config::{self, Config};
use crate::deck::DeckProperties;
use crate::error::{Error, Result};
use crate::loads::Train;

const EXAMPLE_1: &str = include_str!("../data/example1.cfg");
const EXAMPLE_2: &str = include_str!("../data/example2.cfg");
const SPAN_TABLE: &str = include_str!("../data/spans.txt");

/// Short skew slab, 15 m, α = 20°, single 170 kN load.
pub fn example_1() -> Config {
    config::parse_config(EXAMPLE_1).expect("bundled example 1 is valid")
}

/// 24 m skew box slab, α = 10°, crossed by HSLM-A1. The `train.file` entry is
/// left relative; use [`hslm_a1`] for the axles.
pub fn example_2() -> Config {
    config::parse_config(EXAMPLE_2).expect("bundled example 2 is valid")
}

pub fn hslm_a1() -> Train {
    Train::hslm_a1()
}

/// One redesigned deck of the span study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanFixture {
    pub span: f64,
    /// Section depth [m].
    pub depth: f64,
    pub flexural_rigidity: f64,
    pub torsional_rigidity: f64,
    pub mass_per_length: f64,
}

impl SpanFixture {
    /// Deck with these rigidities and mass, taking `E`, `ν`, `r`, `α` and
    /// damping from `base`.
    pub fn deck(&self, base: &DeckProperties) -> Result<DeckProperties> {
        DeckProperties {
            span_length: self.span,
            mass_per_length: self.mass_per_length,
            ..*base
        }
        .with_rigidities(self.flexural_rigidity, self.torsional_rigidity)
    }
}

/// Parses a span table: `L h EI GJ m` per line, `m` with an optional unit.
pub fn parse_span_table(text: &str) -> Result<Vec<SpanFixture>> {
    use config::Dimension;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = idx + 1;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 5 {
            return Err(Error::Parse {
                line: n,
                message: format!("expected `L h EI GJ m`, got `{line}`"),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: n,
                message: format!("`{s}` is not a number"),
            })
        };
        rows.push(SpanFixture {
            span: num(cols[0])?,
            depth: num(cols[1])?,
            flexural_rigidity: num(cols[2])?,
            torsional_rigidity: num(cols[3])?,
            mass_per_length: config::parse_quantity(
                &cols[4..].join(" "),
                Dimension::MassPerLength,
                n,
            )?,
        });
    }
    Ok(rows)
}

/// The five redesigned decks (15–35 m, depth L/14).
pub fn span_fixtures() -> Vec<SpanFixture> {
    parse_span_table(SPAN_TABLE).expect("bundled span table is valid")
}

/// Deck used with the span fixtures: concrete with `E = 3.2e10`, `ν = 0.25`,
/// `r = 0` and 1% damping, at skew `alpha` [rad].
pub fn span_study_base(alpha: f64) -> DeckProperties {
    DeckProperties {
        span_length: 1.0,
        elastic_modulus: 3.2e10,
        poisson_ratio: 0.25,
        second_moment: 1.0,
        torsion_constant: 1.0,
        mass_per_length: 1.0,
        gyration_radius: 0.0,
        skew_angle: alpha,
        damping_ratio: 0.01,
        torsional_damping_ratio: 0.0,
    }
}
