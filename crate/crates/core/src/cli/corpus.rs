//! Germ files shipped with the binary.

/// `(file name, contents)`, sorted by name.
pub const CORPUS: &[(&str, &str)] = &[
    ("example1.germ", include_str!("../../corpus/example1.germ")),
    ("example2.germ", include_str!("../../corpus/example2.germ")),
    ("mixed_census.germ", include_str!("../../corpus/mixed_census.germ")),
    ("no_h2.germ", include_str!("../../corpus/no_h2.germ")),
    ("t4_333.germ", include_str!("../../corpus/t4_333.germ")),
    ("two_components.germ", include_str!("../../corpus/two_components.germ")),
];

pub fn corpus_file(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
