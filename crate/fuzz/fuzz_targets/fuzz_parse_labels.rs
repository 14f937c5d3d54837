#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    let Some((group_spec, label_spec)) = input.split_once('|') else {
        return;
    };
    let Ok(group) = fwsa::parse::parse_group(group_spec) else {
        return;
    };
    if let Ok(labels) = fwsa::parse::parse_labels(label_spec, &group) {
        let literal = labels.literal(&group);
        assert_eq!(fwsa::parse::parse_labels(&literal, &group).unwrap(), labels);
    }
});
