// hug: synthetic ultrasonic micro-gesture pipeline driver.

#include <CLI11.hpp>

#include <iostream>

#include "hug/commands.hpp"
#include "hug/dataset.hpp"

namespace cli = hug::cli;

int main(int argc, char** argv) {
    CLI::App app{"Ultrasonic pulse-Doppler micro-gesture recognition: simulate, process, train, eval, stream"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hug 1.0");

    cli::SimulateOptions sim;
    std::optional<std::uint64_t> sim_seed;
    auto* s = app.add_subcommand("simulate", "Synthesise a gesture dataset (recordings + manifest.json)");
    s->add_option("--config", sim.config, "JSON config or manifest to start from");
    s->add_option("--preset", sim.preset, "Preset: default, extended, exaggerated")->capture_default_str();
    s->add_option("-o,--out", sim.out, "Output directory")->required();
    s->add_flag("--force", sim.force, "Write into a nonempty directory");
    s->add_option("--seed", sim_seed, "Base seed (falls back to HUG_SEED)");
    s->add_option("--snr", sim.snr_db, "Per-sample SNR in dB");
    s->add_option("--per-class", sim.per_class, "Recordings per class per subject");
    s->add_option("--subjects", sim.subjects, "Number of synthetic subjects");
    s->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

    cli::ProcessOptions proc;
    bool no_cubes = false;
    auto* p = app.add_subcommand("process", "Range-Doppler processing and tracking of every recording");
    p->add_option("manifest", proc.manifest, "Dataset manifest.json")->required();
    p->add_option("-o,--out", proc.out, "Output directory")->required();
    p->add_flag("--no-cubes", no_cubes, "Do not write range-Doppler cubes");
    p->add_option("--export-frames", proc.export_frames, "Write the first k frames of each recording as PGM");
    p->add_flag("--force", proc.force, "Write into a nonempty directory");
    p->add_option("--threads", proc.threads, "Worker threads (0 = all cores)");

    cli::TrainOptions tr;
    std::optional<std::uint64_t> tr_seed;
    auto* t = app.add_subcommand("train", "Train per-fold dictionaries and HMM banks");
    t->add_option("processed", tr.processed, "processed.json or its directory")->required();
    t->add_option("-o,--out", tr.out, "Model directory")->required();
    t->add_option("--folds", tr.folds, "loso, all, or comma-separated held-out subjects")->capture_default_str();
    t->add_option("--states", tr.states, "Hidden states per class")->capture_default_str();
    t->add_option("--iterations", tr.iterations, "Baum-Welch iterations")->capture_default_str();
    t->add_option("--smoothing", tr.smoothing, "Pseudo-count added to expected counts")->capture_default_str();
    t->add_option("--priors", tr.priors, "Class priors: uniform or no-finger")->capture_default_str();
    t->add_flag("--uniform-init", tr.uniform_init, "Start from a uniform transition matrix");
    t->add_option("--seed", tr_seed, "Initialisation seed (falls back to HUG_SEED)");
    t->add_option("--threads", tr.threads, "Worker threads (0 = all cores)");

    cli::EvalOptions ev;
    bool no_timing = false;
    auto* e = app.add_subcommand("eval", "Classify held-out subjects with their fold banks");
    e->add_option("processed", ev.processed, "processed.json or its directory")->required();
    e->add_option("-m,--models", ev.models, "Model directory")->required();
    e->add_option("--report", ev.report, "Machine-readable report path (default <models>/report.json)");
    e->add_flag("--no-timing", no_timing, "Omit throughput figures from the text output");

    cli::StreamOptions st;
    auto* r = app.add_subcommand("stream", "Classify a live HUGR frame stream from stdin or TCP");
    r->add_option("-m,--models", st.models, "Model directory")->required();
    r->add_option("--fold", st.fold, "Which bank to use")->capture_default_str();
    r->add_option("--listen", st.listen, "Accept one TCP connection on 127.0.0.1:PORT instead of stdin");
    r->add_option("--window", st.window, "Symbols per decision")->capture_default_str();
    r->add_option("--threshold", st.threshold, "Minimum posterior to report")->capture_default_str();
    r->add_option("--queue", st.queue, "Frames buffered between reader and classifier")->capture_default_str();

    cli::ExportOptions ex;
    auto* x = app.add_subcommand("export-image", "Write one range-Doppler frame as a 16-bit PGM");
    x->add_option("input", ex.input, "Recording (.hugr) or cube (.hugc)")->required();
    x->add_option("--frame", ex.frame, "Frame index")->capture_default_str();
    x->add_option("-o,--out", ex.out, "Output .pgm")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& ok) {
        return app.exit(ok);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return cli::kExitUsage;
    }

    if (*s) {
        sim.seed = sim_seed;
        return cli::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*p) {
        proc.cubes = !no_cubes;
        return cli::cmd_process(proc, std::cout, std::cerr);
    }
    if (*t) {
        tr.seed = tr_seed;
        return cli::cmd_train(tr, std::cout, std::cerr);
    }
    if (*e) {
        ev.timing = !no_timing;
        return cli::cmd_eval(ev, std::cout, std::cerr);
    }
    if (*r) {
        std::ios::sync_with_stdio(false);
        return cli::cmd_stream(st, std::cin, std::cout, std::cerr);
    }
    if (*x) return cli::cmd_export_image(ex, std::cout, std::cerr);
    return cli::kExitUsage;
}
