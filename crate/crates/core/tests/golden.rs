//! The classification table, rebuilt from curve presets and compared byte for byte.

mod common;

#[test]
fn classification_table_is_reproduced() {
    assert_eq!(common::golden_table(), common::GOLDEN);
}
