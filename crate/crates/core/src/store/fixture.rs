use super::Snapshot;

/// The closed pack cyclone vessel corpus in snapshot format.
pub const CYCLONE_FIXTURE: &str = include_str!("../../fixtures/cyclone.toml");

/// Loads the cyclone vessel corpus: 19 artifacts, 38 interactions, 3 teams and the
/// viewpoints of four actors.
pub fn load_cyclone_fixture() -> Snapshot {
    Snapshot::from_toml(CYCLONE_FIXTURE).expect("bundled cyclone fixture is valid")
}
