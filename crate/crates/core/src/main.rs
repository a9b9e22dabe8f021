fn main() {
    std::process::exit(domain_sieve::cli::main());
}
