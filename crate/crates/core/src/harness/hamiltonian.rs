//! Pauli-sum Hamiltonian files.
//!
//! UTF-8 text, one `<coefficient> <pauli-string>` term per line, e.g.
//! `-0.2427 IIZI`. `#` starts a comment; blank lines are skipped. All strings
//! must have the same length, which fixes the qubit count.

use std::path::Path;

use crate::simulator::{PauliString, PauliSum};
use crate::{Error, Result};

pub fn parse_hamiltonian(text: &str, origin: &Path) -> Result<PauliSum> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut terms = Vec::new();
    let mut n_qubits = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [coeff, label] = fields[..] else {
            return Err(parse_err(
                lineno,
                format!("expected `<coefficient> <pauli-string>`, got {body:?}"),
            ));
        };
        let coeff: f64 = coeff
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad coefficient {coeff:?}")))?;
        if !coeff.is_finite() {
            return Err(parse_err(lineno, "coefficient is not finite".into()));
        }
        let pauli = PauliString::new(label).map_err(|e| parse_err(lineno, e.to_string()))?;
        match n_qubits {
            None => n_qubits = Some(pauli.n_qubits()),
            Some(n) if n != pauli.n_qubits() => {
                return Err(parse_err(
                    lineno,
                    format!(
                        "{label} has {} qubits, earlier terms have {n}",
                        pauli.n_qubits()
                    ),
                ))
            }
            _ => {}
        }
        terms.push((coeff, pauli));
    }
    let n = n_qubits.ok_or_else(|| Error::input(format!("{}: no terms", origin.display())))?;
    PauliSum::new(n, terms)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<PauliSum> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_hamiltonian(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# header\n\n-0.2427 IIZI\n 0.5 ZZII  # trailing\n0.1 IIII\n";
        let h = parse_hamiltonian(text, Path::new("h.txt")).unwrap();
        assert_eq!(h.n_qubits(), 4);
        assert_eq!(h.terms().len(), 3);
        assert_eq!(h.terms()[0].0, -0.2427);
        assert_eq!(h.terms()[0].1.as_str(), "IIZI");
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("0.1 ZZ\n0.2 Z\n", 2),
            ("0.1 ZZ\nabc XX\n", 2),
            ("0.1 ZQ\n", 1),
            ("\n\n0.1\n", 3),
            ("0.1 ZZ extra\n", 1),
        ];
        for (text, line) in cases {
            match parse_hamiltonian(text, Path::new("h.txt")) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_hamiltonian("# nothing\n", Path::new("h.txt")).is_err());
    }
}
