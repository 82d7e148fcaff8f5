//! Command-line front end: construct the generator matrices, run individual
//! verifiers or the full battery, compute spectra, sample element orders,
//! and write the verification certificate.
//!
//! Exit codes: 0 all checks pass, 1 a verification check failed, 2 a
//! configuration or environment error (including enumeration limits).

use clap::{Parser, Subcommand, ValueEnum};

use isospec_core::certificate::{self, Config};
use isospec_core::construction::{enumerate_affine_vf, BigGenerators, FrobeniusPair};
use isospec_core::error::Error;
use isospec_core::field::FieldMatrix;
use isospec_core::group::{spectrum_sampled, GeneratorSet, Spectrum};
use isospec_core::pgroup::enumerate_c_group;
use isospec_core::sp43;
use isospec_core::verify::{self, VerifyContext};

#[derive(Parser)]
#[command(name = "isospec", version, about = "Verifies that the 17x17 solvable matrix group over GF(3) is isospectral to S4(3)")]
struct Cli {
    /// Master seed for every randomized check.
    #[arg(long, global = true, env = "ISOSPEC_SEED", default_value_t = 1)]
    seed: u64,

    /// Number of random words sampled from the big group.
    #[arg(long, global = true, env = "ISOSPEC_SAMPLES", default_value_t = 100_000)]
    samples: u64,

    /// Maximum word length for sampled elements.
    #[arg(long, global = true, env = "ISOSPEC_WORD_LENGTH", default_value_t = 64)]
    word_length: usize,

    /// Element limit for closure enumerations.
    #[arg(long, global = true, env = "ISOSPEC_LIMIT", default_value_t = 60_000)]
    limit: usize,

    /// Worker shards for the sampling phase.
    #[arg(long, global = true, env = "ISOSPEC_WORKERS", default_value_t = 1)]
    workers: usize,

    /// Field characteristic; the construction itself requires 3.
    #[arg(long, global = true, env = "ISOSPEC_PRIME", default_value_t = 3)]
    prime: u8,

    /// Certificate output path.
    #[arg(short, long, global = true, env = "ISOSPEC_OUTPUT", default_value = "certificate.json")]
    output: String,

    /// Optional group description file overriding the built-in generators.
    #[arg(long, global = true, env = "ISOSPEC_GENERATORS")]
    generators: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrintTarget {
    #[value(name = "a")]
    SmallA,
    #[value(name = "b")]
    SmallB,
    #[value(name = "A")]
    BigA,
    #[value(name = "B")]
    BigB,
    #[value(name = "C")]
    BigC,
    #[value(name = "D")]
    BigD,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumGroup {
    S43,
    Frobenius,
    Vf,
    Cgroup,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleGroup {
    G,
    S43,
    Frobenius,
    Vf,
}

#[derive(Subcommand)]
enum Command {
    /// Print one of the construction matrices in the plain text format.
    Construct {
        #[arg(long, value_enum)]
        print: PrintTarget,
        /// Print residues above p/2 as negative numbers.
        #[arg(long)]
        symmetric: bool,
    },
    /// Run all verification checks, or a single named one.
    Verify {
        /// Name of a single check to run (see --list).
        #[arg(long)]
        only: Option<String>,
        /// List the available check names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print the exact spectrum of an enumerable group: omega on one line,
    /// mu on the next.
    Spectrum {
        #[arg(long, value_enum)]
        group: SpectrumGroup,
    },
    /// Sample element orders by random words and print the histogram.
    Sample {
        #[arg(long, value_enum, default_value = "g")]
        group: SampleGroup,
        /// Number of samples (overrides --samples).
        #[arg(long)]
        n: Option<u64>,
    },
    /// Run every check and write the certificate.
    Certify,
}

fn config_from(cli: &Cli) -> Config {
    Config {
        prime: cli.prime,
        seed: cli.seed,
        lemma_samples: Config::default().lemma_samples,
        spectrum_samples: cli.samples,
        word_length: cli.word_length,
        limit: cli.limit,
        workers: cli.workers,
        output: cli.output.clone(),
        generators_file: cli.generators.clone(),
    }
}

fn print_spectrum(spectrum: &Spectrum) {
    print!("{}", spectrum.to_text());
}

fn big_generators(config: &Config) -> Result<BigGenerators, Error> {
    match config.load_generator_override()? {
        Some(mats) => BigGenerators::from_matrices(mats),
        None => Ok(BigGenerators::build(&FrobeniusPair::build())),
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let config = config_from(cli);
    match &cli.command {
        Command::Construct { print, symmetric } => {
            config.validate()?;
            let fp = FrobeniusPair::build();
            let big = big_generators(&config)?;
            let matrix: &FieldMatrix = match print {
                PrintTarget::SmallA => fp.a(),
                PrintTarget::SmallB => fp.b(),
                PrintTarget::BigA => big.a(),
                PrintTarget::BigB => big.b(),
                PrintTarget::BigC => big.c(),
                PrintTarget::BigD => big.d(),
            };
            if *symmetric {
                print!("{}", matrix.to_text_symmetric());
            } else {
                print!("{}", matrix.to_text());
            }
            Ok(0)
        }
        Command::Verify { only, list } => {
            if *list {
                for name in verify::CHECK_NAMES {
                    println!("{name}");
                }
                println!("spectrum-verdict");
                return Ok(0);
            }
            config.validate()?;
            match only {
                Some(name) => {
                    let ctx = VerifyContext::build(config.load_generator_override()?)?;
                    let result = verify::run_named_check(name, &ctx, &config.verify_params())?;
                    let status = if result.passed() { "PASS" } else { "FAIL" };
                    println!("{status}  {} ({} cases, {} ms)", result.name, result.samples_used, result.millis);
                    for witness in &result.witnesses {
                        for line in witness.lines() {
                            println!("      {line}");
                        }
                    }
                    if let Some(counterexample) = &result.counterexample {
                        println!("      counterexample: {counterexample}");
                    }
                    Ok(if result.passed() { 0 } else { 1 })
                }
                None => {
                    let cert = certificate::run_all(&config)?;
                    print!("{}", cert.human_summary());
                    Ok(if cert.passed() { 0 } else { 1 })
                }
            }
        }
        Command::Spectrum { group } => {
            config.validate()?;
            let spectrum = match group {
                SpectrumGroup::S43 => {
                    let reference = certificate::reference_spectrum(config.limit)?;
                    Spectrum::from_maximal(&reference.mu)
                }
                SpectrumGroup::Frobenius => FrobeniusPair::build().enumerate()?.spectrum_exhaustive(),
                SpectrumGroup::Vf => {
                    enumerate_affine_vf(&FrobeniusPair::build())?.spectrum_exhaustive()
                }
                SpectrumGroup::Cgroup => enumerate_c_group(&FrobeniusPair::build())?.spectrum(),
            };
            print_spectrum(&spectrum);
            Ok(0)
        }
        Command::Sample { group, n } => {
            config.validate()?;
            let samples = n.unwrap_or(config.spectrum_samples);
            let fp = FrobeniusPair::build();
            let gens = match group {
                SampleGroup::G => big_generators(&config)?.generator_set()?,
                SampleGroup::S43 => GeneratorSet::new(sp43::generators(), "Sp(4,3)")?,
                SampleGroup::Frobenius => {
                    GeneratorSet::new(vec![fp.a().clone(), fp.b().clone()], "F")?
                }
                SampleGroup::Vf => enumerate_affine_vf(&fp)?.generators().clone(),
            };
            let counts = spectrum_sampled(
                &gens,
                samples,
                config.word_length,
                config.seed,
                config.workers,
            )?;
            for (order, count) in &counts {
                println!("{order} {count}");
            }
            Ok(0)
        }
        Command::Certify => {
            config.validate()?;
            let cert = certificate::run_all(&config)?;
            cert.write_to(&config.output)?;
            print!("{}", cert.human_summary());
            println!("certificate written to {}", config.output);
            Ok(if cert.passed() { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
