use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;

use super::{meet_cost, Hierarchy, HierarchyError, Reciprocal, SimilarityTransform};
use crate::error::{Error, Result};
use crate::rdf_store::Iri;
use crate::util::fmt_sig17;

/// Symmetric concept-by-concept similarity matrix with a unit diagonal,
/// stored dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSimilarityMatrix {
    concepts: Vec<Iri>,
    index: HashMap<Iri, usize>,
    values: Vec<f64>,
}

pub fn build_concept_matrix(h: &Hierarchy, concepts: &[Iri]) -> Result<ConceptSimilarityMatrix, HierarchyError> {
    build_concept_matrix_with(h, concepts, &Reciprocal)
}

/// Each unordered pair is evaluated once; rows are computed in parallel and
/// every cell is a pure function of its pair, so the result does not depend on
/// the number of worker threads.
pub fn build_concept_matrix_with(
    h: &Hierarchy,
    concepts: &[Iri],
    transform: &dyn SimilarityTransform,
) -> Result<ConceptSimilarityMatrix, HierarchyError> {
    let n = concepts.len();
    let mut index = HashMap::with_capacity(n);
    let mut nodes = Vec::with_capacity(n);
    for (i, c) in concepts.iter().enumerate() {
        if index.insert(c.clone(), i).is_some() {
            return Err(HierarchyError::DuplicateConcept(c.clone()));
        }
        nodes.push(h.node(c).ok_or_else(|| HierarchyError::UnknownConcept(c.clone()))?);
    }
    let climbs: Vec<_> = nodes.par_iter().map(|&node| h.ancestor_costs(node)).collect();

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let d = if nodes[i] == nodes[j] {
                        0.0
                    } else {
                        meet_cost(&climbs[i], &climbs[j])
                    };
                    transform.similarity(d)
                })
                .collect()
        })
        .collect();

    let mut values = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        values[i * n + i] = 1.0;
        for (off, s) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    Ok(ConceptSimilarityMatrix {
        concepts: concepts.to_vec(),
        index,
        values,
    })
}

impl ConceptSimilarityMatrix {
    /// Assemble from a full row-major matrix, checking the matrix laws.
    pub fn from_parts(concepts: Vec<Iri>, values: Vec<f64>) -> Result<Self, HierarchyError> {
        let n = concepts.len();
        if values.len() != n * n {
            return Err(HierarchyError::MalformedMatrix(format!(
                "{} values for {n} concepts",
                values.len()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, c) in concepts.iter().enumerate() {
            if index.insert(c.clone(), i).is_some() {
                return Err(HierarchyError::DuplicateConcept(c.clone()));
            }
        }
        for i in 0..n {
            if values[i * n + i] != 1.0 {
                return Err(HierarchyError::MalformedMatrix(format!("diagonal entry {i} is not 1")));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(HierarchyError::MalformedMatrix(format!("entry ({i},{j}) = {v} outside [0,1]")));
                }
                if v != values[j * n + i] {
                    return Err(HierarchyError::MalformedMatrix(format!("entry ({i},{j}) is not symmetric")));
                }
            }
        }
        Ok(ConceptSimilarityMatrix { concepts, index, values })
    }

    /// Rebuild from the row-major upper triangle (diagonal included).
    pub fn from_upper_triangle(concepts: Vec<Iri>, upper: &[f64]) -> Result<Self, HierarchyError> {
        let n = concepts.len();
        if upper.len() != n * (n + 1) / 2 {
            return Err(HierarchyError::MalformedMatrix(format!(
                "{} triangle values for {n} concepts",
                upper.len()
            )));
        }
        let mut values = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                values[i * n + j] = upper[k];
                values[j * n + i] = upper[k];
                k += 1;
            }
        }
        Self::from_parts(concepts, values)
    }

    pub fn upper_triangle(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            out.extend_from_slice(&self.values[i * n + i..(i + 1) * n]);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Iri] {
        &self.concepts
    }

    pub fn index_of(&self, concept: &Iri) -> Option<usize> {
        self.index.get(concept).copied()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn similarity(&self, a: &Iri, b: &Iri) -> Option<f64> {
        Some(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    /// CSV with a header row of concept IRIs and the IRI in the first column.
    /// An optional `stamp` is written first as a `#` comment line.
    pub fn write_csv<W: Write>(&self, mut out: W, stamp: Option<&str>) -> Result<()> {
        if let Some(stamp) = stamp {
            writeln!(out, "# {stamp}").map_err(|e| Error::io("writing concept matrix", e))?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(self.len() + 1);
        header.push("concept".to_string());
        header.extend(self.concepts.iter().map(|c| c.to_string()));
        w.write_record(&header)?;
        for (i, c) in self.concepts.iter().enumerate() {
            let mut record = Vec::with_capacity(self.len() + 1);
            record.push(c.to_string());
            record.extend(self.row(i).iter().map(|&v| fmt_sig17(v)));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("writing concept matrix", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(input);
        let header = r.headers()?.clone();
        let concepts: Vec<Iri> = header
            .iter()
            .skip(1)
            .map(|s| Iri::new(s).map_err(Error::from))
            .collect::<Result<_>>()?;
        let n = concepts.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, record) in r.records().enumerate() {
            let record = record?;
            if record.len() != n + 1 {
                return Err(Error::Format(format!("concept matrix row {i} has {} cells", record.len())));
            }
            if record.get(0) != Some(concepts.get(i).map(Iri::as_str).unwrap_or("")) {
                return Err(Error::Format(format!("concept matrix row {i} label does not match header")));
            }
            for cell in record.iter().skip(1) {
                values.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Format(format!("bad number '{cell}' in concept matrix")))?,
                );
            }
        }
        Ok(Self::from_parts(concepts, values)?)
    }
}
