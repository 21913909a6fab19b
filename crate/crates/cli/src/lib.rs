//! Library surface of the command line: configuration handling, the run
//! orchestration, and the report/output writers, exposed for the
//! integration and acceptance suites.

pub mod config;
pub mod output;
pub mod report;
pub mod run;
pub mod units;

/// Bundled benchmark configurations shipped with the binary (also present
/// under `configs/` in the source tree).
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "example1_case1",
        include_str!("../../../configs/example1_case1.toml"),
    ),
    (
        "example1_case1_long",
        include_str!("../../../configs/example1_case1_long.toml"),
    ),
    (
        "example1_case2",
        include_str!("../../../configs/example1_case2.toml"),
    ),
    (
        "example2_rainfall",
        include_str!("../../../configs/example2_rainfall.toml"),
    ),
    (
        "example3_case1",
        include_str!("../../../configs/example3_case1.toml"),
    ),
    (
        "example3_case2",
        include_str!("../../../configs/example3_case2.toml"),
    ),
    (
        "general_tabulated",
        include_str!("../../../configs/general_tabulated.toml"),
    ),
    (
        "half_line_case2",
        include_str!("../../../configs/half_line_case2.toml"),
    ),
];

/// Fetch a bundled configuration by name.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
