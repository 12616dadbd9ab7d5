#![no_main]

use std::sync::OnceLock;

use ddgk::specio::presets;
use ddgk::DdAlgebra;
use libfuzzer_sys::fuzz_target;

fn algebra() -> &'static DdAlgebra {
    static ALG: OnceLock<DdAlgebra> = OnceLock::new();
    ALG.get_or_init(|| presets::dszsd().algebra)
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let alg = algebra();
        if let Ok(e) = ddgk::parse_expr(alg, text) {
            let back = ddgk::parse_expr(alg, &e.render(alg.ring())).expect("rendered element reparses");
            assert_eq!(back, e);
        }
    }
});
