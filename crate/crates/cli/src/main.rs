use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use simplicia::bistellar::{bistellarly_equivalent, reduce, Equivalence, ReductionOptions};
use simplicia::blowup::{blowup, ResolutionBlock};
use simplicia::generators::{boundary_simplex, cross_polytope, cyclic_polytope_boundary, simplex, stacked_sphere};
use simplicia::invariants::{euler_characteristic, homology, is_orientable};
use simplicia::slicing::{ns_triangulation, slicing, surface_type, VertexPartition};
use simplicia::store::{self, ComplexDocument, ExportFormat, Library};
use simplicia::Complex;

#[derive(Parser)]
#[command(name = "simplicia", version, about = "Simplicial complexes from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Simplex,
    Bdsimplex,
    Cross,
    Cyclic,
    Stacked,
}

#[derive(Subcommand)]
enum Command {
    /// Build a standard triangulation
    Construct {
        family: Family,
        #[arg(short)]
        d: Option<usize>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: PathBuf,
    },
    /// Summary of the basic invariants
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    Homology {
        file: PathBuf,
    },
    Flags {
        file: PathBuf,
    },
    /// Reduce the vertex number by bistellar moves
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Search for a bistellar equivalence
    Equivalent {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Normal surface separating two vertex sets, given as `A/B`
    Slice {
        file: PathBuf,
        #[arg(long)]
        sides: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Triangulate a saved normal surface
    Nstriangulate {
        file: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Resolve an ordinary double point
    Blowup {
        file: PathBuf,
        #[arg(long)]
        vertex: u32,
        #[arg(long)]
        block: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short)]
        o: PathBuf,
    },
    /// Fixture library
    Lib {
        #[command(subcommand)]
        command: LibCommand,
    },
    Export {
        file: PathBuf,
        #[arg(long)]
        format: String,
    },
}

#[derive(Subcommand)]
enum LibCommand {
    /// Name fragment or predicate such as `dim == 3 and chi == 0`
    Search {
        query: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &Path) -> Result<Complex> {
    store::load(path).with_context(|| format!("loading {}", path.display()))
}

fn save(doc: &ComplexDocument, path: &Path) -> Result<()> {
    store::save_document(doc, path).with_context(|| format!("writing {}", path.display()))
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct { family, d, n, seed, o } => {
            let need = |x: Option<usize>, flag: &str| x.with_context(|| format!("`{flag}` is required for this family"));
            let c = match family {
                Family::Simplex => simplex(need(d, "-d")?),
                Family::Bdsimplex => boundary_simplex(need(d, "-d")?)?,
                Family::Cross => cross_polytope(need(d, "-d")?)?,
                Family::Cyclic => cyclic_polytope_boundary(need(d, "-d")?, need(n, "-n")?)?,
                Family::Stacked => stacked_sphere(need(d, "-d")?, need(n, "-n")?, seed)?,
            };
            store::fill_cache(&c);
            save(&ComplexDocument::from_complex(&c), &o)?;
            eprintln!("wrote {}", o.display());
        }
        Command::Info { file, json } => {
            let c = load(&file)?;
            let f = c.f_vector();
            let chi = euler_characteristic(&c);
            let h = homology(&c);
            let flags = c.structural_flags();
            let orientable = is_orientable(&c).ok();
            if json {
                let v = serde_json::json!({
                    "name": c.name(),
                    "dim": c.dim(),
                    "n": c.n_vertices(),
                    "f_vector": f,
                    "euler_characteristic": chi,
                    "homology": h,
                    "flags": flags,
                    "orientable": orientable,
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("Name=\"{}\"", c.name().unwrap_or(""));
                println!("Dim={}", c.dim());
                println!("F={}", list(&f));
                println!("Chi={chi}");
                println!("Homology={h}");
                println!(
                    "IsPure={} IsConnected={} IsStronglyConnected={} IsPseudoManifold={} HasBoundary={}",
                    flags.is_pure,
                    flags.is_connected,
                    flags.is_strongly_connected,
                    flags.is_pseudomanifold,
                    flags.has_boundary
                );
                if let Some(o) = orientable {
                    println!("IsOrientable={o}");
                }
            }
        }
        Command::Homology { file } => println!("{}", homology(&load(&file)?)),
        Command::Flags { file } => {
            println!("{}", serde_json::to_string_pretty(&load(&file)?.structural_flags())?);
        }
        Command::Reduce { file, seed, rounds, o } => {
            let c = load(&file)?;
            let mut opts = ReductionOptions::default().with_seed(seed);
            if let Some(r) = rounds {
                opts = opts.with_rounds(r);
            }
            let r = reduce(&c, &opts)?;
            store::fill_cache(&r.complex);
            println!("F={}", list(&r.complex.f_vector()));
            println!("moves={} rounds={} converged={}", r.moves.len(), r.rounds, r.converged);
            save(&ComplexDocument::from_complex(&r.complex).with_move_log(r.moves), &o)?;
        }
        Command::Equivalent { first, second, seed, json } => {
            let a = load(&first)?;
            let b = load(&second)?;
            let result = bistellarly_equivalent(&a, &b, &ReductionOptions::default().with_seed(seed))?;
            match (&result, json) {
                (Equivalence::Equivalent(cert), true) => println!("{}", serde_json::to_string_pretty(cert)?),
                (Equivalence::Equivalent(cert), false) => println!(
                    "equivalent ({} + {} moves, {} rounds)",
                    cert.moves_first.len(),
                    cert.moves_second.len(),
                    cert.rounds
                ),
                (Equivalence::NotEstablished, true) => println!("null"),
                (Equivalence::NotEstablished, false) => println!("not established"),
            }
        }
        Command::Slice { file, sides, o } => {
            let c = load(&file)?;
            let ns = slicing(&c, &VertexPartition::parse(&sides)?)?;
            println!("F={}", list(&ns.f_vector()));
            println!("Chi={}", ns.euler_characteristic());
            match surface_type(&ns) {
                Ok(t) => println!("TopologicalType=\"{t}\""),
                Err(e) => eprintln!("warning: {e}"),
            }
            if let Some(o) = o {
                store::save_normal_surface(&ns, &o).with_context(|| format!("writing {}", o.display()))?;
            }
        }
        Command::Nstriangulate { file, o } => {
            let ns = store::load_normal_surface(&file).with_context(|| format!("loading {}", file.display()))?;
            let t = ns_triangulation(&ns);
            store::fill_cache(&t);
            println!("F={}", list(&t.f_vector()));
            save(&ComplexDocument::from_complex(&t), &o)?;
        }
        Command::Blowup { file, vertex, block, seed, o } => {
            let c = load(&file)?;
            let library = Library::open_default().context("opening the fixture library")?;
            let rp3 = library
                .search_by_name("RP^3")
                .into_iter()
                .map(|e| &e.complex)
                .find(|c| c.dim() == 3)
                .context("library has no RP^3 fixture")?;
            let block = match block {
                Some(path) => {
                    let doc = store::load_document(&path).with_context(|| format!("loading {}", path.display()))?;
                    let provenance = doc.provenance.clone().unwrap_or_default();
                    ResolutionBlock::new(doc.to_complex()?, "RP^3", provenance)?
                }
                None => ResolutionBlock::diagonal_complement(),
            };
            let b = blowup(&c, vertex, &block, rp3, &ReductionOptions::default().with_seed(seed))?;
            for event in &b.log {
                eprintln!("{}", serde_json::to_string(event)?);
            }
            store::fill_cache(&b.complex);
            println!("F={}", list(&b.complex.f_vector()));
            println!("Homology={}", homology(&b.complex));
            save(&ComplexDocument::from_complex(&b.complex), &o)?;
        }
        Command::Lib {
            command: LibCommand::Search { query, json },
        } => {
            let library = Library::open_default().context("opening the fixture library")?;
            let hits = library.search(&query)?;
            if json {
                let v: Vec<_> = hits
                    .iter()
                    .map(|e| serde_json::json!({ "name": e.name, "file": e.file, "f_vector": e.complex.f_vector() }))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                for e in hits {
                    println!("{}\t{}", e.name, e.file.file_name().unwrap_or_default().to_string_lossy());
                }
            }
        }
        Command::Export { file, format } => {
            let format: ExportFormat = format.parse()?;
            print!("{}", store::export(&load(&file)?, format));
        }
    }
    Ok(())
}
