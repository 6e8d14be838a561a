use std::io::IsTerminal;

fn main() {
    let stdout = std::io::stdout();
    let terminal = stdout.is_terminal();
    let code = apwenian::cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut stdout.lock(),
        &mut std::io::stderr().lock(),
        terminal,
    );
    std::process::exit(code);
}
