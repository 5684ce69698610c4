//! Unit-suffixed numbers accepted on the command line, converted to SI.
//! A bare number is read in the quantity's display unit.

fn split(text: &str) -> (&str, &str) {
    let t = text.trim();
    let end = t
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && t[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map_or(t.len(), |(i, _)| i);
    (&t[..end], t[end..].trim())
}

fn parse_with(text: &str, quantity: &str, table: &[(&str, f64)]) -> Result<f64, String> {
    let (number, suffix) = split(text);
    let value: f64 = number
        .parse()
        .map_err(|_| format!("'{text}' is not a number"))?;
    if !value.is_finite() {
        return Err(format!("'{text}' is not finite"));
    }
    let factor = table
        .iter()
        .find(|(s, _)| *s == suffix)
        .map(|(_, f)| *f)
        .ok_or_else(|| {
            let known: Vec<&str> = table
                .iter()
                .map(|(s, _)| *s)
                .filter(|s| !s.is_empty())
                .collect();
            format!(
                "bad unit suffix '{suffix}' for {quantity} (expected one of {})",
                known.join(", ")
            )
        })?;
    Ok(value * factor)
}

/// Length in m; bare numbers are mm.
pub fn parse_length(text: &str) -> Result<f64, String> {
    parse_with(
        text,
        "length",
        &[
            ("", 1e-3),
            ("mm", 1e-3),
            ("cm", 1e-2),
            ("m", 1.0),
            ("um", 1e-6),
        ],
    )
}

/// Voltage in V.
pub fn parse_voltage(text: &str) -> Result<f64, String> {
    parse_with(
        text,
        "voltage",
        &[("", 1.0), ("V", 1.0), ("kV", 1e3), ("mV", 1e-3)],
    )
}

/// Capacitance per unit length in F/m; bare numbers are nF/mm.
pub fn parse_capacitance_per_length(text: &str) -> Result<f64, String> {
    parse_with(
        text,
        "capacitance per length",
        &[
            ("", 1e-6),
            ("nF/mm", 1e-6),
            ("pF/mm", 1e-9),
            ("nF/m", 1e-9),
            ("uF/m", 1e-6),
            ("F/m", 1.0),
        ],
    )
}

/// Curvature in 1/m.
pub fn parse_curvature(text: &str) -> Result<f64, String> {
    parse_with(
        text,
        "curvature",
        &[("", 1.0), ("1/m", 1.0), ("/m", 1.0), ("1/mm", 1e3)],
    )
}

/// Axial strain, dimensionless; `ue` marks microstrain.
pub fn parse_strain(text: &str) -> Result<f64, String> {
    parse_with(text, "strain", &[("", 1.0), ("ue", 1e-6)])
}

/// One or more comma-separated voltages.
#[derive(Debug, Clone, PartialEq)]
pub struct Voltages(pub Vec<f64>);

pub fn parse_voltages(text: &str) -> Result<Voltages, String> {
    text.split(',')
        .map(parse_voltage)
        .collect::<Result<Vec<_>, _>>()
        .map(Voltages)
}
