fn main() -> std::process::ExitCode {
    optcurve::cli::main_with(std::env::args_os())
}
