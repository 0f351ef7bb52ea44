/// Coordinate files bundled with the crate, by name.
pub const BUILTIN_FIXTURES: &[(&str, &str)] =
    &[("berlin52", include_str!("../../fixtures/berlin52.tsp"))];

pub fn builtin_coordinates(name: &str) -> Option<&'static str> {
    BUILTIN_FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
