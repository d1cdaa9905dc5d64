use std::io::{BufRead, Write};

use super::{Axiom, AxiomKind, ScoreError};
use crate::rdf_store::Iri;

/// Write `kind<TAB>lhs<TAB>rhs<TAB>score` lines, IRIs unbracketed.
pub fn write_scored_axioms<W: Write>(
    mut out: W,
    axioms: &[(Axiom, f64)],
    stamp: Option<&str>,
) -> std::io::Result<()> {
    if let Some(stamp) = stamp {
        writeln!(out, "# {stamp}")?;
    }
    for (a, score) in axioms {
        writeln!(out, "{}\t{}\t{}\t{}", a.kind(), a.lhs(), a.rhs(), score)?;
    }
    out.flush()
}

/// Read axiom lines with an optional score column. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_axioms<R: BufRead>(input: R) -> Result<Vec<(Axiom, Option<f64>)>, ScoreError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| ScoreError::Tsv { line: line_no, message };
        let line = line.map_err(|e| err(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        if cols.len() != 3 && cols.len() != 4 {
            return Err(err(format!("expected 3 or 4 tab-separated columns, found {}", cols.len())));
        }
        let kind: AxiomKind = cols[0].parse().map_err(|e: ScoreError| err(e.to_string()))?;
        let lhs: Iri = cols[1].parse().map_err(|e| err(format!("{e}")))?;
        let rhs: Iri = cols[2].parse().map_err(|e| err(format!("{e}")))?;
        let axiom = Axiom::new(kind, lhs, rhs).map_err(|e| err(e.to_string()))?;
        let score = match cols.get(3) {
            Some(s) => Some(
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("invalid score '{s}'")))?,
            ),
            None => None,
        };
        out.push((axiom, score));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let a = Axiom::new(
            AxiomKind::SubClassOf,
            Iri::new("http://e.org/B").unwrap(),
            Iri::new("http://e.org/A").unwrap(),
        )
        .unwrap();
        let items = vec![(a.clone(), -0.1337), (a.flipped(), 1.0)];
        let mut buf = Vec::new();
        write_scored_axioms(&mut buf, &items, Some("seed=3")).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "# seed=3\nSubClassOf\thttp://e.org/B\thttp://e.org/A\t-0.1337\nSubClassOf\thttp://e.org/A\thttp://e.org/B\t1\n"
        );
        let back = read_axioms(buf.as_slice()).unwrap();
        assert_eq!(back, vec![(a.clone(), Some(-0.1337)), (a.flipped(), Some(1.0))]);
    }

    #[test]
    fn unscored_and_bracketed() {
        let text = "\n# comment\nDisjointWith\t<http://e.org/A>\t<http://e.org/B>\n";
        let got = read_axioms(text.as_bytes()).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].1, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "SubClassOf\thttp://e.org/A\thttp://e.org/B\t0.5\nSubClassOf\thttp://e.org/A\n";
        assert!(matches!(read_axioms(text.as_bytes()), Err(ScoreError::Tsv { line: 2, .. })));
        let text = "SubClassOf\thttp://e.org/A\thttp://e.org/B\tNaN\n";
        assert!(matches!(read_axioms(text.as_bytes()), Err(ScoreError::Tsv { line: 1, .. })));
    }
}
