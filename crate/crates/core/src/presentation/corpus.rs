use super::{Presentation, PresentationError, SubstitutionMap};

const ENTRIES: &[(&str, &str)] = &[
    ("SL2Z7Z7_14GEN", include_str!("../../corpus/sl2z7z7_14gen.pres")),
    ("SL2Z7Z7_6GEN", include_str!("../../corpus/sl2z7z7_6gen.pres")),
    ("SL2_Z", include_str!("../../corpus/sl2_z.pres")),
    ("GL2_Z", include_str!("../../corpus/gl2_z.pres")),
    ("PSL2_Z", include_str!("../../corpus/psl2_z.pres")),
    ("SL2_F2", include_str!("../../corpus/sl2_f2.pres")),
    ("SL2_F3", include_str!("../../corpus/sl2_f3.pres")),
    ("SL2_F5", include_str!("../../corpus/sl2_f5.pres")),
    ("SL2_ZI", include_str!("../../corpus/sl2_zi.pres")),
    ("SL2_ZOMEGA", include_str!("../../corpus/sl2_zomega.pres")),
    ("SL2_ZSQRTM5", include_str!("../../corpus/sl2_zsqrtm5.pres")),
];

/// Text of the 14-to-6 generator map for `SL2Z7Z7_14GEN`.
pub const SUBSTITUTION_14_TO_6: &str = include_str!("../../corpus/sl2z7z7_14to6.map");

/// A row of the homology tables: corpus name and display label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub name: &'static str,
    pub label: &'static str,
}

/// Rows of the homology tables, in display order.
pub const TABLE_ROWS: &[TableRow] = &[
    TableRow { name: "GL2_Z", label: "GL2(Z)" },
    TableRow { name: "SL2_Z", label: "SL2(Z)" },
    TableRow { name: "SL2_F2", label: "SL2(Z/2)" },
    TableRow { name: "SL2_F3", label: "SL2(Z/3)" },
    TableRow { name: "SL2_F5", label: "SL2(Z/5)" },
    TableRow { name: "SL2_ZI", label: "SL2(Z[i])" },
    TableRow { name: "SL2_ZOMEGA", label: "SL2(Z[w])" },
    TableRow { name: "SL2_ZSQRTM5", label: "SL2(Z[sqrt-5])" },
    TableRow { name: "PSL2_Z", label: "PSL2(Z)" },
];

pub fn corpus_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// Look up a built-in presentation by name.
pub fn corpus(name: &str) -> Result<Presentation, PresentationError> {
    match ENTRIES.iter().find(|(n, _)| *n == name) {
        Some((_, text)) => Presentation::parse(text),
        None => Err(PresentationError::UnknownCorpus {
            name: name.to_string(),
            available: corpus_names().into_iter().map(String::from).collect(),
        }),
    }
}

pub fn substitution_14_to_6() -> SubstitutionMap {
    SubstitutionMap::parse(SUBSTITUTION_14_TO_6).expect("built-in map parses")
}
