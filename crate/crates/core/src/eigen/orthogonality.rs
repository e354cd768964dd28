use super::Mode;
use crate::deck::DeckProperties;
use crate::quadrature::GaussLegendre;

fn panels_for(modes: &[Mode]) -> usize {
    let kl = modes
        .iter()
        .map(|m| m.beta.max(m.lambda.unwrap_or(0.0)) * m.span)
        .fold(0.0, f64::max);
    (4.0 * kl).ceil().max(32.0) as usize
}

/// Largest normalized cross-modal integral over all pairs `n ≠ m`, taking
/// the flexural term `∫ m φ_n φ_m dx / √(M_f,n M_f,m)` and the torsional term
/// `∫ m r² ϕ_n ϕ_m dx / √(M_t,n M_t,m)` separately. Torsional terms are
/// skipped when either torsional mass is zero. A single mode gives 0.
pub fn orthogonality_residual(modes: &[Mode], deck: &DeckProperties) -> f64 {
    let rule = GaussLegendre::sixteen();
    let panels = panels_for(modes);
    let (m, r2, l) = (
        deck.mass_per_length,
        deck.gyration_radius.powi(2),
        deck.span_length,
    );
    let mut worst: f64 = 0.0;
    for (i, a) in modes.iter().enumerate() {
        for b in &modes[i + 1..] {
            let flex = m * rule.composite(|x| a.flex_at(x) * b.flex_at(x), 0.0, l, panels);
            worst = worst.max(flex.abs() / (a.modal_mass_flex * b.modal_mass_flex).sqrt());
            if a.modal_mass_tors > 0.0 && b.modal_mass_tors > 0.0 {
                let tors = m * r2 * rule.composite(|x| a.tors_at(x) * b.tors_at(x), 0.0, l, panels);
                worst = worst.max(tors.abs() / (a.modal_mass_tors * b.modal_mass_tors).sqrt());
            }
        }
    }
    worst
}

/// Largest normalized cross-modal kinetic-energy integral
/// `∫ (m φ_n φ_m + m r² ϕ_n ϕ_m) dx / √(M_n M_m)` with `M = M_f + M_t`.
///
/// This is the combined orthogonality of the coupled bending–torsion modes;
/// for the simplified model it coincides with [`orthogonality_residual`].
pub fn coupled_orthogonality_residual(modes: &[Mode], deck: &DeckProperties) -> f64 {
    let rule = GaussLegendre::sixteen();
    let panels = panels_for(modes);
    let (m, r2, l) = (
        deck.mass_per_length,
        deck.gyration_radius.powi(2),
        deck.span_length,
    );
    let mut worst: f64 = 0.0;
    for (i, a) in modes.iter().enumerate() {
        for b in &modes[i + 1..] {
            let cross = rule.composite(
                |x| m * a.flex_at(x) * b.flex_at(x) + m * r2 * a.tors_at(x) * b.tors_at(x),
                0.0,
                l,
                panels,
            );
            let na = a.modal_mass_flex + a.modal_mass_tors;
            let nb = b.modal_mass_flex + b.modal_mass_tors;
            worst = worst.max(cross.abs() / (na * nb).sqrt());
        }
    }
    worst
}
