#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = ddgk::parse_spec(text) {
            let again = ddgk::parse_spec(&ddgk::render_spec(&p)).expect("rendered text reparses");
            assert_eq!(again.fingerprint(), p.fingerprint());
        }
    }
});
