fn main() {
    std::process::exit(ltlf_learn::cli::main());
}
