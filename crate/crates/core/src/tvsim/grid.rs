use super::spec::{AppSpec, Key, Screen};

/// Fills absent navigation entries from grid coordinates.
///
/// Left/Right go to the nearest widget in the same row, Up/Down to the
/// nearest widget in the same column. Explicit entries win. Screens without
/// hints are returned unchanged.
pub fn derive_nav_from_grid(spec: &AppSpec) -> AppSpec {
    let mut out = spec.clone();
    for screen in &mut out.screens {
        derive_screen(screen);
    }
    out
}

fn derive_screen(screen: &mut Screen) {
    if screen.grid_hints.is_empty() {
        return;
    }
    let cells: Vec<(&String, i64, i64)> = screen.grid_hints.iter().map(|(id, &(r, c))| (id, r, c)).collect();

    let mut derived = Vec::new();
    for &(src, row, col) in &cells {
        for key in [Key::Up, Key::Down, Key::Left, Key::Right] {
            // distance along the axis the key moves on; None when off-axis or wrong direction
            let step = |r: i64, c: i64| -> Option<i64> {
                match key {
                    Key::Right if r == row && c > col => Some(c - col),
                    Key::Left if r == row && c < col => Some(col - c),
                    Key::Down if c == col && r > row => Some(r - row),
                    Key::Up if c == col && r < row => Some(row - r),
                    _ => None,
                }
            };
            let nearest = cells.iter().filter_map(|&(id, r, c)| step(r, c).map(|d| (d, id))).min();
            if let Some((_, dst)) = nearest {
                derived.push((src.clone(), key, dst.clone()));
            }
        }
    }
    for (src, key, dst) in derived {
        screen.nav.entry(src).or_default().entry(key).or_insert(dst);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tvsim::load_app_spec;

    fn grid_doc(cells: &[(&str, i64, i64)], nav: &str) -> AppSpec {
        let widgets: Vec<String> = cells.iter().map(|(id, _, _)| format!(r#"{{"id":"{id}"}}"#)).collect();
        let hints: Vec<String> = cells.iter().map(|(id, r, c)| format!(r#""{id}":[{r},{c}]"#)).collect();
        let doc = format!(
            r#"{{"name":"g","rootScreen":"s","screens":[{{"id":"s","widgets":[{}],"nav":{nav},"gridHints":{{{}}}}}]}}"#,
            widgets.join(","),
            hints.join(",")
        );
        load_app_spec(&doc).unwrap()
    }

    fn entry_count(spec: &AppSpec) -> usize {
        spec.screens.iter().flat_map(|s| s.nav.values()).map(|m| m.len()).sum()
    }

    #[test]
    fn single_row_of_two() {
        let spec = derive_nav_from_grid(&grid_doc(&[("a", 0, 0), ("b", 0, 1)], "{}"));
        assert_eq!(entry_count(&spec), 2);
        assert_eq!(spec.screens[0].nav_target("a", Key::Right), Some("b"));
        assert_eq!(spec.screens[0].nav_target("b", Key::Left), Some("a"));
    }

    #[test]
    fn explicit_entry_is_kept() {
        let cells = [("v1", 0, 0), ("v2", 0, 1), ("v3", 0, 2), ("v4", 1, 0), ("v5", 1, 1), ("v6", 1, 2)];
        let spec = derive_nav_from_grid(&grid_doc(&cells, r#"{"v1":{"Right":"v4"}}"#));
        assert_eq!(spec.screens[0].nav_target("v1", Key::Right), Some("v4"));
        assert_eq!(spec.screens[0].nav_target("v1", Key::Down), Some("v4"));
        assert_eq!(entry_count(&spec), 14);
    }

    #[test]
    fn gaps_are_skipped_to_nearest() {
        let spec = derive_nav_from_grid(&grid_doc(&[("a", 0, 0), ("b", 0, 5), ("c", 0, 9)], "{}"));
        assert_eq!(spec.screens[0].nav_target("a", Key::Right), Some("b"));
        assert_eq!(spec.screens[0].nav_target("c", Key::Left), Some("b"));
    }

    #[test]
    fn screens_without_hints_pass_through() {
        let spec =
            load_app_spec(r#"{"name":"x","rootScreen":"s","screens":[{"id":"s","widgets":[{"id":"a"}]}]}"#).unwrap();
        assert_eq!(derive_nav_from_grid(&spec), spec);
    }
}
