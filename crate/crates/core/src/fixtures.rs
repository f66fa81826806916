//! Bundled link diagrams.

/// Name and PD text of every bundled diagram.
pub const DIAGRAMS: &[(&str, &str)] = &[
    ("trefoil", include_str!("../data/trefoil.pd")),
    ("figure8", include_str!("../data/figure8.pd")),
    ("hopf", include_str!("../data/hopf.pd")),
    ("whitehead", include_str!("../data/whitehead.pd")),
    ("borromean", include_str!("../data/borromean.pd")),
];

pub fn diagram(name: &str) -> Option<&'static str> {
    DIAGRAMS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
