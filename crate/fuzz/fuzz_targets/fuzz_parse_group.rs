#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = std::str::from_utf8(data) {
        if let Ok(group) = fwsa::parse::parse_group(spec) {
            let canon = if group.is_trivial() {
                "1".to_string()
            } else {
                group
                    .factors()
                    .iter()
                    .map(|n| format!("Z{n}"))
                    .collect::<Vec<_>>()
                    .join("x")
            };
            assert_eq!(fwsa::parse::parse_group(&canon).unwrap(), group);
        }
    }
});
