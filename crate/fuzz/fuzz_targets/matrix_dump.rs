#![no_main]
use cavitylab::bem::dump::read_matrix_dump;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_matrix_dump(data);
});
