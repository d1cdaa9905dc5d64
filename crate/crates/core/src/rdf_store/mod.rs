//! In-memory RDF triple store specialised for class-axiom work.
//!
//! The [`Dataset`] keeps every parsed triple and, alongside, the handful of
//! indexes the rest of the crate needs: class membership of individuals (both
//! directions), asserted `rdfs:subClassOf` edges and asserted
//! `owl:disjointWith` edges. Nothing else is interpreted.

mod parser;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::{parse_triples, RdfFormat};

pub mod vocab {
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const RDF_PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
    pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const RDFS_DATATYPE: &str = "http://www.w3.org/2000/01/rdf-schema#Datatype";
    pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OWL_DISJOINT_WITH: &str = "http://www.w3.org/2002/07/owl#disjointWith";
    pub const OWL_EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";
    pub const OWL_NAMED_INDIVIDUAL: &str = "http://www.w3.org/2002/07/owl#NamedIndividual";
    pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

    /// `rdf:type` objects that declare what kind of schema entity the subject
    /// is, rather than class membership of an individual.
    pub const META_TYPES: &[&str] = &[
        OWL_CLASS,
        RDFS_CLASS,
        RDFS_DATATYPE,
        RDF_PROPERTY,
        OWL_NAMED_INDIVIDUAL,
        "http://www.w3.org/2002/07/owl#Ontology",
        "http://www.w3.org/2002/07/owl#ObjectProperty",
        "http://www.w3.org/2002/07/owl#DatatypeProperty",
        "http://www.w3.org/2002/07/owl#AnnotationProperty",
        "http://www.w3.org/2002/07/owl#FunctionalProperty",
        "http://www.w3.org/2002/07/owl#InverseFunctionalProperty",
        "http://www.w3.org/2002/07/owl#TransitiveProperty",
        "http://www.w3.org/2002/07/owl#SymmetricProperty",
        "http://www.w3.org/2002/07/owl#AsymmetricProperty",
        "http://www.w3.org/2002/07/owl#ReflexiveProperty",
        "http://www.w3.org/2002/07/owl#IrreflexiveProperty",
        "http://www.w3.org/2002/07/owl#Restriction",
        "http://www.w3.org/2002/07/owl#AllDisjointClasses",
        "http://www.w3.org/2002/07/owl#AllDifferent",
        "http://www.w3.org/2002/07/owl#Axiom",
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown prefix '{prefix}:'")]
    UnknownPrefix { line: usize, prefix: String },
    #[error("line {line}: relative IRI <{iri}> is not supported")]
    RelativeIri { line: usize, iri: String },
    #[error("invalid IRI <{0}>")]
    InvalidIri(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
}

/// An absolute IRI. Prefixes are expanded before construction; comparison is
/// exact and case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if !is_valid_iri_text(&value) {
            return Err(RdfError::InvalidIri(value));
        }
        if !has_scheme(&value) {
            return Err(RdfError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_iri_text(value: &str) -> bool {
    !value.is_empty()
        && !value
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

/// `scheme ":"` with an RFC 3986 scheme.
pub(crate) fn has_scheme(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Iri {
    type Err = RdfError;

    /// Accepts both `http://x` and `<http://x>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = s
            .strip_prefix('<')
            .and_then(|rest| rest.strip_suffix('>'))
            .unwrap_or(s);
        Iri::new(inner)
    }
}

impl TryFrom<String> for Iri {
    type Error = RdfError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Option<Iri>,
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    /// Blank node label without the `_:` prefix.
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_literal(&lit.lexical))?;
                if let Some(lang) = &lit.language {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &lit.datatype {
                    write!(f, "^^<{dt}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, RdfError> {
        if matches!(subject, Term::Literal(_)) {
            return Err(RdfError::LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Shorthand for IRI-only triples.
    pub fn iris(subject: &Iri, predicate: &str, object: &Iri) -> Self {
        Triple {
            subject: Term::Iri(subject.clone()),
            predicate: Iri(predicate.to_string()),
            object: Term::Iri(object.clone()),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {} .", self.subject, self.predicate, self.object)
    }
}

/// Position of an individual in [`Dataset::individuals`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndividualId(pub u32);

pub type IndividualSet = BTreeSet<IndividualId>;

/// A deduplicated set of triples plus class-level indexes. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    triples: BTreeSet<Triple>,
    declared_classes: BTreeSet<Iri>,
    individuals: Vec<Term>,
    individual_ids: BTreeMap<Term, IndividualId>,
    type_index: Vec<BTreeSet<Iri>>,
    rev_type_index: BTreeMap<Iri, IndividualSet>,
    subclass_edges: BTreeSet<(Iri, Iri)>,
    disjoint_edges: BTreeSet<(Iri, Iri)>,
    subclasses: BTreeMap<Iri, BTreeSet<Iri>>,
    superclasses: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl Dataset {
    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> Self {
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        let mut ds = Dataset::default();

        for t in &triples {
            match t.predicate.as_str() {
                vocab::RDF_TYPE => {
                    let Term::Iri(class) = &t.object else {
                        continue;
                    };
                    if class.as_str() == vocab::OWL_CLASS {
                        if let Term::Iri(c) = &t.subject {
                            ds.declared_classes.insert(c.clone());
                        }
                        continue;
                    }
                    if vocab::META_TYPES.contains(&class.as_str()) {
                        continue;
                    }
                    let next = IndividualId(ds.individuals.len() as u32);
                    let id = *ds.individual_ids.entry(t.subject.clone()).or_insert(next);
                    if id == next {
                        ds.individuals.push(t.subject.clone());
                        ds.type_index.push(BTreeSet::new());
                    }
                    ds.type_index[id.0 as usize].insert(class.clone());
                    ds.rev_type_index.entry(class.clone()).or_default().insert(id);
                }
                vocab::RDFS_SUBCLASS_OF => {
                    if let (Term::Iri(sub), Term::Iri(sup)) = (&t.subject, &t.object) {
                        if sub != sup {
                            ds.subclass_edges.insert((sub.clone(), sup.clone()));
                        }
                    }
                }
                vocab::OWL_DISJOINT_WITH => {
                    if let (Term::Iri(a), Term::Iri(b)) = (&t.subject, &t.object) {
                        if a != b {
                            ds.disjoint_edges.insert((a.clone(), b.clone()));
                        }
                    }
                }
                _ => {}
            }
        }
        for (sub, sup) in &ds.subclass_edges {
            ds.subclasses.entry(sup.clone()).or_default().insert(sub.clone());
            ds.superclasses.entry(sub.clone()).or_default().insert(sup.clone());
        }
        ds.triples = triples;
        ds
    }

    pub fn parse(text: &str, format: RdfFormat) -> Result<Self, RdfError> {
        parse_triples(text, format)
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn subclass_edges(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.subclass_edges
    }

    pub fn disjoint_edges(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.disjoint_edges
    }

    /// Explicit `owl:Class` declarations plus every endpoint of a class-axiom edge.
    pub fn classes(&self) -> BTreeSet<Iri> {
        let mut out = self.declared_classes.clone();
        for (a, b) in self.subclass_edges.iter().chain(&self.disjoint_edges) {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        out
    }

    pub fn individuals(&self) -> &[Term] {
        &self.individuals
    }

    pub fn individual(&self, id: IndividualId) -> &Term {
        &self.individuals[id.0 as usize]
    }

    pub fn individual_id(&self, term: &Term) -> Option<IndividualId> {
        self.individual_ids.get(term).copied()
    }

    /// Asserted classes of an individual.
    pub fn types_of(&self, id: IndividualId) -> &BTreeSet<Iri> {
        &self.type_index[id.0 as usize]
    }

    pub fn direct_subclasses(&self, class: &Iri) -> impl Iterator<Item = &Iri> {
        self.subclasses.get(class).into_iter().flatten()
    }

    pub fn direct_superclasses(&self, class: &Iri) -> impl Iterator<Item = &Iri> {
        self.superclasses.get(class).into_iter().flatten()
    }

    /// `class` together with everything below it under the transitive
    /// closure of the asserted subclass edges.
    pub fn subclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        closure(class, |c| self.direct_subclasses(c))
    }

    /// `class` together with every transitive superclass.
    pub fn superclass_closure(&self, class: &Iri) -> BTreeSet<Iri> {
        closure(class, |c| self.direct_superclasses(c))
    }

    /// Individuals that are members of `class`, either asserted only or with
    /// membership inherited from subclasses.
    pub fn instances_of(&self, class: &Iri, inferred: bool) -> IndividualSet {
        if !inferred {
            return self.rev_type_index.get(class).cloned().unwrap_or_default();
        }
        let mut out = IndividualSet::new();
        for c in self.subclass_closure(class) {
            if let Some(members) = self.rev_type_index.get(&c) {
                out.extend(members.iter().copied());
            }
        }
        out
    }

    /// Serialise as canonical N-Triples, one triple per line in sorted order.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

fn closure<'a, F, I>(start: &'a Iri, next: F) -> BTreeSet<Iri>
where
    F: Fn(&Iri) -> I,
    I: Iterator<Item = &'a Iri>,
{
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        for n in next(c) {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/{s}")).unwrap()
    }

    fn nt(s: &str) -> Dataset {
        Dataset::parse(s, RdfFormat::NTriples).unwrap()
    }

    #[test]
    fn empty_input_gives_empty_dataset() {
        let d = nt("");
        assert!(d.is_empty());
        assert!(d.classes().is_empty());
        assert!(d.individuals().is_empty());
        assert!(d.subclass_edges().is_empty());
        assert!(d.disjoint_edges().is_empty());
    }

    #[test]
    fn single_subclass_triple() {
        let d = nt("<http://example.org/a> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://example.org/b> .\n");
        let edges: Vec<_> = d.subclass_edges().iter().cloned().collect();
        assert_eq!(edges, vec![(iri("a"), iri("b"))]);
        let classes = d.classes();
        assert!(classes.contains(&iri("a")) && classes.contains(&iri("b")));
    }

    #[test]
    fn blank_subclass_is_stored_but_not_indexed() {
        let d = nt("_:x <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://example.org/b> .\n");
        assert_eq!(d.len(), 1);
        assert!(d.subclass_edges().is_empty());
        assert!(d.classes().is_empty());
    }

    #[test]
    fn reflexive_edges_dropped() {
        let a = iri("a");
        let d = Dataset::from_triples([Triple::iris(&a, vocab::RDFS_SUBCLASS_OF, &a)]);
        assert!(d.subclass_edges().is_empty());
    }

    #[test]
    fn instances_of_unknown_class_is_empty() {
        let d = nt("");
        assert!(d.instances_of(&iri("nope"), false).is_empty());
        assert!(d.instances_of(&iri("nope"), true).is_empty());
    }

    #[test]
    fn instances_of_follows_one_edge_when_inferred() {
        let (a, b, x) = (iri("A"), iri("B"), iri("x"));
        let d = Dataset::from_triples([
            Triple::iris(&b, vocab::RDFS_SUBCLASS_OF, &a),
            Triple::iris(&x, vocab::RDF_TYPE, &b),
        ]);
        let xid = d.individual_id(&Term::Iri(x)).unwrap();
        assert_eq!(d.instances_of(&a, true), IndividualSet::from([xid]));
        assert!(d.instances_of(&a, false).is_empty());
    }

    #[test]
    fn instances_of_direct_lookup() {
        let (a, x, y) = (iri("A"), iri("x"), iri("y"));
        let d = Dataset::from_triples([
            Triple::iris(&x, vocab::RDF_TYPE, &a),
            Triple::iris(&y, vocab::RDF_TYPE, &a),
        ]);
        let got: BTreeSet<Term> = d
            .instances_of(&a, false)
            .into_iter()
            .map(|id| d.individual(id).clone())
            .collect();
        assert_eq!(got, BTreeSet::from([Term::Iri(x), Term::Iri(y)]));
    }

    #[test]
    fn classes_from_declarations_and_edges() {
        let (a, b) = (iri("A"), iri("B"));
        let d = Dataset::from_triples([Triple::iris(&a, vocab::RDFS_SUBCLASS_OF, &b)]);
        assert_eq!(d.classes(), BTreeSet::from([a.clone(), b]));

        let owl_class = Iri::new(vocab::OWL_CLASS).unwrap();
        let d = Dataset::from_triples([Triple::iris(&a, vocab::RDF_TYPE, &owl_class)]);
        assert_eq!(d.classes(), BTreeSet::from([a]));
        assert!(d.individuals().is_empty(), "owl:Class declaration is not membership");
    }

    #[test]
    fn literals_never_indexed() {
        let d = Dataset::parse(
            "<http://e.org/x> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> \"A\" .\n",
            RdfFormat::NTriples,
        )
        .unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.individuals().is_empty());
    }

    #[test]
    fn duplicates_collapse() {
        let line = "<http://e.org/a> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://e.org/b> .\n";
        let d = nt(&line.repeat(3));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn iri_validation() {
        assert!(Iri::new("").is_err());
        assert!(Iri::new("http://a b").is_err());
        assert!(Iri::new("relative/path").is_err());
        assert!(Iri::new("urn:x").is_ok());
        assert_eq!("<http://e.org/A>".parse::<Iri>().unwrap().as_str(), "http://e.org/A");
    }
}
