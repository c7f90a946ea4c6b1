// Copyright 2026 The abstat Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    let code = abstat_cli::run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
