fn main() {
    std::process::exit(weier4::cli_run(std::env::args_os()));
}
