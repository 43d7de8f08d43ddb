//! Finite presentations: parsing, rendering, substitution and simplification.

mod corpus;
mod parse;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::words::{Letter, Word};

pub use corpus::{
    corpus, corpus_names, substitution_14_to_6, TableRow, SUBSTITUTION_14_TO_6, TABLE_ROWS,
};
pub use parse::{parse_word, ParseError, ParseErrorKind};
use parse::{is_identifier, lines, parse_ident_list, WordParser};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {index} uses generator index {generator} but only {arity} generators exist")]
    RelatorOutOfRange {
        index: usize,
        generator: usize,
        arity: usize,
    },
    #[error("substitution sources {found:?} do not match presentation generators {expected:?}")]
    SourceMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("image of `{name}` references target index {generator}, but only {arity} targets exist")]
    ImageOutOfRange {
        name: String,
        generator: usize,
        arity: usize,
    },
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("unknown corpus entry `{name}`; available: {}", available.join(", "))]
    UnknownCorpus {
        name: String,
        available: Vec<String>,
    },
}

/// Named generators and relator words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

fn check_names(names: &[String]) -> Result<(), PresentationError> {
    let mut seen = HashSet::new();
    for n in names {
        if !is_identifier(n) {
            return Err(PresentationError::InvalidName(n.clone()));
        }
        if !seen.insert(n.as_str()) {
            return Err(PresentationError::DuplicateGenerator(n.clone()));
        }
    }
    Ok(())
}

impl Presentation {
    pub fn new<S: Into<String>>(
        generator_names: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let generator_names: Vec<String> = generator_names.into_iter().map(Into::into).collect();
        check_names(&generator_names)?;
        let arity = generator_names.len();
        for (index, r) in relators.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| l.generator() >= arity) {
                return Err(PresentationError::RelatorOutOfRange {
                    index,
                    generator: l.generator(),
                    arity,
                });
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    /// Parse the `gens:` / `rel:` text format.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for line in lines(text) {
            let line = line?;
            match line.key {
                "gens" => {
                    if names.is_some() {
                        return Err(ParseError {
                            line: line.number,
                            column: line.key_col,
                            kind: ParseErrorKind::Syntax("second `gens:` line".into()),
                        }
                        .into());
                    }
                    names = Some(parse_ident_list(&line)?);
                }
                "rel" => {
                    let Some(ns) = names.as_ref() else {
                        return Err(ParseError {
                            line: line.number,
                            column: line.key_col,
                            kind: ParseErrorKind::MissingHeader("gens:"),
                        }
                        .into());
                    };
                    let map: HashMap<&str, usize> =
                        ns.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                    let w = WordParser::new(line.body, line.number, line.body_col, &map)
                        .parse_complete()?;
                    relators.push(w);
                }
                other => {
                    return Err(ParseError {
                        line: line.number,
                        column: line.key_col,
                        kind: ParseErrorKind::Syntax(format!("unknown key `{other}`")),
                    }
                    .into())
                }
            }
        }
        let Some(names) = names else {
            return Err(ParseError {
                line: text.lines().count().max(1),
                column: 1,
                kind: ParseErrorKind::MissingHeader("gens:"),
            }
            .into());
        };
        Ok(Presentation {
            generator_names: names,
            relators,
        })
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn arity(&self) -> usize {
        self.generator_names.len()
    }

    /// Render in the text format; `parse(render(p)) == p`.
    pub fn render(&self) -> String {
        let mut out = format!("gens: {}", self.generator_names.join(" "));
        for r in &self.relators {
            out.push_str("\nrel: ");
            out.push_str(&self.word_to_string(r));
        }
        out
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        w.display(&self.generator_names).to_string()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        parse_word(text, &self.generator_names)
    }

    /// Cyclically reduce relators, drop trivial ones and drop duplicates up to
    /// rotation and inversion. The generator list is untouched.
    pub fn simplify(&self) -> Presentation {
        let mut seen = HashSet::new();
        let mut relators = Vec::new();
        for r in &self.relators {
            let (core, _) = r.cyclic_reduce();
            if core.is_identity() {
                continue;
            }
            if seen.insert(core.cyclic_key()) {
                relators.push(core);
            }
        }
        Presentation {
            generator_names: self.generator_names.clone(),
            relators,
        }
    }

    /// Rewrite every relator through `m` letter by letter.
    pub fn apply_substitution(&self, m: &SubstitutionMap) -> Result<Presentation, PresentationError> {
        if m.source_generators != self.generator_names {
            return Err(PresentationError::SourceMismatch {
                expected: self.generator_names.clone(),
                found: m.source_generators.clone(),
            });
        }
        let relators = self.relators.iter().map(|r| m.apply(r)).collect();
        Ok(Presentation {
            generator_names: m.target_generators.clone(),
            relators,
        })
    }

    /// Row `i` is the exponent vector of relator `i`.
    pub fn exponent_rows(&self) -> Vec<Vec<i64>> {
        let n = self.arity();
        self.relators
            .iter()
            .map(|r| r.exponent_vector(n).expect("relators are validated against the arity"))
            .collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
    Presentation::parse(text)
}

pub fn render(p: &Presentation) -> String {
    p.render()
}

pub fn simplify(p: &Presentation) -> Presentation {
    p.simplify()
}

pub fn apply_substitution(
    p: &Presentation,
    m: &SubstitutionMap,
) -> Result<Presentation, PresentationError> {
    p.apply_substitution(m)
}

/// A homomorphism from the free group on the sources to the free group on the targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMap {
    source_generators: Vec<String>,
    target_generators: Vec<String>,
    images: Vec<Word>,
}

impl SubstitutionMap {
    pub fn new<S: Into<String>, T: Into<String>>(
        source_generators: impl IntoIterator<Item = S>,
        target_generators: impl IntoIterator<Item = T>,
        images: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let source_generators: Vec<String> =
            source_generators.into_iter().map(Into::into).collect();
        let target_generators: Vec<String> =
            target_generators.into_iter().map(Into::into).collect();
        check_names(&source_generators)?;
        check_names(&target_generators)?;
        if images.len() < source_generators.len() {
            return Err(PresentationError::MissingImage(
                source_generators[images.len()].clone(),
            ));
        }
        if images.len() > source_generators.len() {
            return Err(PresentationError::SourceMismatch {
                expected: source_generators.clone(),
                found: Vec::new(),
            });
        }
        let arity = target_generators.len();
        for (s, w) in source_generators.iter().zip(&images) {
            if let Some(l) = w.letters().iter().find(|l| l.generator() >= arity) {
                return Err(PresentationError::ImageOutOfRange {
                    name: s.clone(),
                    generator: l.generator(),
                    arity,
                });
            }
        }
        Ok(SubstitutionMap {
            source_generators,
            target_generators,
            images,
        })
    }

    /// The map sending every generator of `p` to itself.
    pub fn identity(p: &Presentation) -> Self {
        SubstitutionMap {
            source_generators: p.generator_names.clone(),
            target_generators: p.generator_names.clone(),
            images: (0..p.arity()).map(Word::generator).collect(),
        }
    }

    /// Parse `targets: ...` followed by `map: src -> word` lines. Sources are
    /// taken in the order of the `map:` lines.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut targets: Option<Vec<String>> = None;
        let mut sources: Vec<String> = Vec::new();
        let mut images = Vec::new();
        for line in lines(text) {
            let line = line?;
            match line.key {
                "targets" => {
                    if targets.is_some() {
                        return Err(ParseError {
                            line: line.number,
                            column: line.key_col,
                            kind: ParseErrorKind::Syntax("second `targets:` line".into()),
                        }
                        .into());
                    }
                    targets = Some(parse_ident_list(&line)?);
                }
                "map" => {
                    let Some(ts) = targets.as_ref() else {
                        return Err(ParseError {
                            line: line.number,
                            column: line.key_col,
                            kind: ParseErrorKind::MissingHeader("targets:"),
                        }
                        .into());
                    };
                    let Some(arrow) = line.body.find("->") else {
                        return Err(ParseError {
                            line: line.number,
                            column: line.body_col,
                            kind: ParseErrorKind::Syntax("expected `source -> word`".into()),
                        }
                        .into());
                    };
                    let src_raw = &line.body[..arrow];
                    let src = src_raw.trim();
                    let src_col =
                        line.body_col + (src_raw.len() - src_raw.trim_start().len());
                    if !is_identifier(src) {
                        return Err(ParseError {
                            line: line.number,
                            column: src_col,
                            kind: ParseErrorKind::InvalidIdentifier(src.into()),
                        }
                        .into());
                    }
                    if sources.iter().any(|s| s == src) {
                        return Err(ParseError {
                            line: line.number,
                            column: src_col,
                            kind: ParseErrorKind::DuplicateGenerator(src.into()),
                        }
                        .into());
                    }
                    let map: HashMap<&str, usize> =
                        ts.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                    let body = &line.body[arrow + 2..];
                    let w = WordParser::new(body, line.number, line.body_col + arrow + 2, &map)
                        .parse_complete()?;
                    sources.push(src.to_string());
                    images.push(w);
                }
                other => {
                    return Err(ParseError {
                        line: line.number,
                        column: line.key_col,
                        kind: ParseErrorKind::Syntax(format!("unknown key `{other}`")),
                    }
                    .into())
                }
            }
        }
        let Some(targets) = targets else {
            return Err(ParseError {
                line: text.lines().count().max(1),
                column: 1,
                kind: ParseErrorKind::MissingHeader("targets:"),
            }
            .into());
        };
        SubstitutionMap::new(sources, targets, images)
    }

    pub fn source_generators(&self) -> &[String] {
        &self.source_generators
    }

    pub fn target_generators(&self) -> &[String] {
        &self.target_generators
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of(&self, source: &str) -> Option<&Word> {
        self.source_generators
            .iter()
            .position(|s| s == source)
            .map(|i| &self.images[i])
    }

    /// Image of a word over the sources.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::<Letter>::new();
        for l in w.letters() {
            let img = &self.images[l.generator()];
            if l.is_inverse() {
                out.extend(img.letters().iter().rev().map(|x| x.inverse()));
            } else {
                out.extend_from_slice(img.letters());
            }
        }
        Word::new(out)
    }

    pub fn render(&self) -> String {
        let mut out = format!("targets: {}", self.target_generators.join(" "));
        for (s, w) in self.source_generators.iter().zip(&self.images) {
            out.push_str(&format!("\nmap: {s} -> {}", w.display(&self.target_generators)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    #[test]
    fn commutator_expands() {
        let q = p("gens: z u1\nrel: [z,u1]");
        assert_eq!(q.word_to_string(&q.relators()[0]), "z^-1*u1^-1*z*u1");
    }

    #[test]
    fn cubed_product_expands() {
        let q = p("gens: a u1 b0 b1\nrel: (b0*b1^-1*a^-1*u1)^3");
        assert_eq!(q.relators()[0].len(), 12);
        assert_eq!(
            q.word_to_string(&q.relators()[0]),
            "b0*b1^-1*a^-1*u1*b0*b1^-1*a^-1*u1*b0*b1^-1*a^-1*u1"
        );
    }

    #[test]
    fn negative_power() {
        let q = p("gens: z b1\nrel: b1^-7*z");
        assert_eq!(q.relators()[0], Word::from_syllables(&[(1, -7), (0, 1)]));
    }

    #[test]
    fn comments_and_blank_lines() {
        let q = p("# header\n\ngens: a b # two\nrel: a^2 # first\n");
        assert_eq!(q.arity(), 2);
        assert_eq!(q.relators().len(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        let e = Presentation::parse("gens: a\nrel: a*c").unwrap_err();
        let PresentationError::Parse(e) = e else { panic!() };
        assert_eq!((e.line, e.column), (2, 8));
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("c".into()));

        let e = Presentation::parse("gens: a a").unwrap_err();
        let PresentationError::Parse(e) = e else { panic!() };
        assert_eq!(e.kind, ParseErrorKind::DuplicateGenerator("a".into()));
        assert_eq!((e.line, e.column), (1, 9));

        let e = Presentation::parse("gens: a\nrel: a^x").unwrap_err();
        let PresentationError::Parse(e) = e else { panic!() };
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent("x".into()));

        let e = Presentation::parse("gens: a\nrel: a^2.5").unwrap_err();
        let PresentationError::Parse(e) = e else { panic!() };
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent("2.5".into()));

        let e = Presentation::parse("gens: a b\nrel: a b").unwrap_err();
        let PresentationError::Parse(e) = e else { panic!() };
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 8);

        assert!(Presentation::parse("rel: a").is_err());
        assert!(Presentation::parse("gens: a\nrel: (a").is_err());
        assert!(Presentation::parse("gens: a\nrel: [a a]").is_err());
    }

    #[test]
    fn render_examples() {
        let q = Presentation::new(["a"], vec![Word::generator(0).pow(4)]).unwrap();
        assert_eq!(q.render(), "gens: a\nrel: a^4");
        let free = Presentation::new(["a", "b"], vec![]).unwrap();
        assert_eq!(free.render(), "gens: a b");
        assert_eq!(p(&free.render()), free);
    }

    #[test]
    fn identity_atom_round_trips() {
        let q = Presentation::new(["a"], vec![Word::identity()]).unwrap();
        assert_eq!(q.render(), "gens: a\nrel: 1");
        assert_eq!(p(&q.render()), q);
    }

    #[test]
    fn substitution_collapses() {
        let q = p("gens: a b\nrel: b*a^-2");
        let m = SubstitutionMap::parse("targets: a\nmap: a -> a\nmap: b -> a^2").unwrap();
        let r = q.apply_substitution(&m).unwrap();
        assert_eq!(r.generator_names(), ["a"]);
        assert_eq!(r.relators(), [Word::identity()]);
        assert!(r.simplify().relators().is_empty());
    }

    #[test]
    fn identity_substitution() {
        let q = p("gens: a b\nrel: a^2*b^-3\nrel: [a,b]");
        let m = SubstitutionMap::identity(&q);
        assert_eq!(q.apply_substitution(&m).unwrap(), q);
        assert_eq!(SubstitutionMap::parse(&m.render()).unwrap(), m);
    }

    #[test]
    fn substitution_mismatch() {
        let q = p("gens: a b\nrel: a");
        let m = SubstitutionMap::parse("targets: a\nmap: a -> a").unwrap();
        assert!(matches!(
            q.apply_substitution(&m),
            Err(PresentationError::SourceMismatch { .. })
        ));
        let e = SubstitutionMap::parse("targets: a\nmap: b -> c").unwrap_err();
        assert!(matches!(
            e,
            PresentationError::Parse(ParseError {
                kind: ParseErrorKind::UnknownIdentifier(_),
                ..
            })
        ));
    }

    #[test]
    fn simplify_examples() {
        let q = Presentation::new(
            ["a"],
            vec![Word::identity(), Word::generator(0).pow(4), Word::generator(0).pow(4)],
        )
        .unwrap();
        assert_eq!(q.simplify().relators(), [Word::generator(0).pow(4)]);

        let q = p("gens: a b\nrel: b^-1*a^2*b");
        assert_eq!(q.simplify(), p("gens: a b\nrel: a^2"));

        let q = p("gens: a b\nrel: a*b^2\nrel: b^-2*a^-1");
        assert_eq!(q.simplify().relators().len(), 1);
    }
}
