#![no_main]

use fwsa::category::CategoryTag;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Some((group_spec, module_spec)) = input.split_once('|') else {
        return;
    };
    let Ok(group) = fwsa::parse::parse_group(group_spec) else {
        return;
    };
    for tag in [
        CategoryTag::Fws,
        CategoryTag::Tws,
        CategoryTag::Fs,
        CategoryTag::FsA,
    ] {
        if let Ok(module) = fwsa::parse::parse_module(module_spec, &group, tag) {
            let canon = module.describe();
            let again = fwsa::parse::parse_module(&canon, &group, tag).unwrap();
            assert_eq!(again.describe(), canon);
        }
    }
});
