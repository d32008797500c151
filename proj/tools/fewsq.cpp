#include <fewsq/fewsq.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace fewsq;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

/// First keyword of the first non-blank, non-comment line.
std::string leading_keyword(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto end = line.find_first_of(" \t\r", first);
        return line.substr(first, end == std::string::npos ? std::string::npos : end - first);
    }
    return {};
}

/// A catalog name, or a file holding a DFAO, a morphic system, or a literal word.
struct Input {
    std::string name;
    std::string text;
    bool is_named() const { return !name.empty(); }
};

Input resolve_input(const std::string& arg) {
    if (has_construction(arg)) return {arg, {}};
    if (std::filesystem::is_regular_file(arg)) return {{}, read_file(arg)};
    throw UsageError("'" + arg + "' is neither a construction name nor a readable file");
}

Word literal_word(const std::string& text) {
    std::string digits;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!digits.empty() && line.find(',') != std::string::npos) digits += ',';
        digits += line.substr(first);
    }
    return parse_word(digits);
}

Word input_prefix(const Input& in, std::optional<std::size_t> length, bool direct) {
    const std::size_t n = length.value_or(65536);
    if (in.is_named()) return word_prefix(in.name, n, direct);
    if (direct) throw UsageError("--direct applies to catalog names only");
    const std::string kw = leading_keyword(in.text);
    if (kw == "dfao") return generate_prefix(parse_dfao(in.text), n);
    if (kw == "morphism") {
        std::istringstream is(in.text);
        MorphicSystem sys = read_morphic_system(is);
        return morphic_word_prefix(sys.morphism, sys.coding, 0, n);
    }
    Word w = literal_word(in.text);
    if (length && *length < w.size()) w.resize(*length);
    return w;
}

SearchConstraint make_constraint(const std::optional<std::size_t>& max_order, const std::optional<std::size_t>& max_squares,
                                 const std::string& roots, std::optional<std::size_t> window) {
    SearchConstraint c;
    if (!roots.empty()) {
        RootSet required = parse_roots(roots);
        c = max_squares ? SearchConstraint{} : SearchConstraint::exact_roots(required);
        c.required_roots = std::move(required);
    }
    if (max_order) c.max_square_order = *max_order;
    if (max_squares) c.max_distinct_squares = *max_squares;
    if (window) c.check_window = *window;
    if (!c.max_square_order && !c.max_distinct_squares && !c.required_roots)
        throw UsageError("give at least one of --max-order, --max-squares, --roots");
    return c;
}

int outcome_code(const SearchOutcome& o) { return o.status == SearchStatus::budget_exceeded ? kBudget : kOk; }

void save_witness(const SearchOutcome& o, const std::string& path) {
    if (path.empty() || o.status != SearchStatus::found) return;
    std::ostringstream os;
    if (o.dfao) write_dfao(os, *o.dfao);
    if (o.morphism) write_morphism(os, *o.morphism);
    write_text(path, os.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Binary words with few distinct squares: generation, square analysis, automata and searches"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    // generate
    auto* gen = app.add_subcommand("generate", "Print a prefix of a word");
    std::string gen_input;
    std::optional<std::size_t> gen_length;
    bool gen_direct = false;
    gen->add_option("input", gen_input, "Construction name, DFAO file or morphic system file")->required();
    gen->add_option("--length,-n", gen_length, "Prefix length (default 65536)")->check(CLI::NonNegativeNumber);
    gen->add_flag("--direct", gen_direct, "Use constant-time access for arithmetic-progression images");

    // squares
    auto* sq = app.add_subcommand("squares", "Distinct squares of a prefix");
    std::string sq_input;
    std::optional<std::size_t> sq_length;
    sq->add_option("input", sq_input, "Construction name, DFAO file, morphic system file or word file")->required();
    sq->add_option("--length,-n", sq_length, "Prefix length (default 65536; whole file for literal words)")
        ->check(CLI::NonNegativeNumber);

    // verify
    auto* ver = app.add_subcommand("verify", "Check a catalog construction against its recorded properties");
    std::string ver_name;
    std::size_t ver_length = 65536;
    VerifyOptions ver_opts;
    ver->add_option("name", ver_name, "Construction name")->required();
    ver->add_option("--length,-n", ver_length, "Window length")->check(CLI::PositiveNumber);
    ver->add_option("--compare-length", ver_opts.comparison_length, "Residual comparison length when learning")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    ver->add_option("--max-states", ver_opts.max_learned_states, "State budget when learning")->check(CLI::PositiveNumber);

    // convert
    auto* conv = app.add_subcommand("convert", "Convert between DFAO and morphic system files");
    std::string conv_dir, conv_file, conv_out;
    conv->add_option("direction", conv_dir, "morphic-to-dfao or dfao-to-morphic")
        ->required()
        ->check(CLI::IsMember({"morphic-to-dfao", "dfao-to-morphic"}));
    conv->add_option("file", conv_file, "Input file")->required()->check(CLI::ExistingFile);
    conv->add_option("--out,-o", conv_out, "Output file (default standard output)");

    // minimize
    auto* mini = app.add_subcommand("minimize", "Minimize a DFAO file");
    std::string mini_file, mini_out;
    mini->add_option("file", mini_file, "DFAO file")->required()->check(CLI::ExistingFile);
    mini->add_option("--out,-o", mini_out, "Output file (default standard output)");

    // search
    auto* search = app.add_subcommand("search", "Searches for words and morphisms with few squares");
    search->require_subcommand(1);
    std::optional<std::size_t> max_order, max_squares, window;
    std::string roots, out_path;
    bool trace = false;
    auto constraint_flags = [&](CLI::App* cmd) {
        cmd->add_option("--max-order", max_order, "Largest allowed square order");
        cmd->add_option("--max-squares", max_squares, "Largest allowed number of distinct squares");
        cmd->add_option("--roots", roots, "Required roots, e.g. 0,1,10 (exactly these unless --max-squares is given)");
        cmd->add_option("--window", window, "Check window for a witness")->check(CLI::PositiveNumber);
        cmd->add_flag("--trace", trace, "Stream search events to standard error");
    };

    auto* lex = search->add_subcommand("lexleast", "Lexicographically least automatic word");
    unsigned lex_base = 2;
    std::size_t lex_states = 0, lex_depth = 4096;
    lex->add_option("--base,-k", lex_base, "Automaton base")->check(CLI::Range(2u, 1u << 16));
    lex->add_option("--states,-s", lex_states, "State bound")->required()->check(CLI::PositiveNumber);
    lex->add_option("--depth", lex_depth, "Prefix length a witness must reach")->check(CLI::PositiveNumber);
    lex->add_option("--out", out_path, "Write the witness automaton here");
    constraint_flags(lex);

    auto* morph = search->add_subcommand("morphism", "Least-weight morphism with image lengths in arithmetic progression");
    std::size_t max_weight = 0;
    morph->add_option("--max-weight", max_weight, "Largest weight to try")->required()->check(CLI::PositiveNumber);
    morph->add_option("--out", out_path, "Write the witness morphism here");
    constraint_flags(morph);

    auto* sweep = search->add_subcommand("sweep", "lexleast over every base k >= 3 and state bound s with k s <= P");
    std::size_t max_product = 0, sweep_depth = 1024;
    sweep->add_option("--max-product", max_product, "Largest k s")->required()->check(CLI::Range(std::size_t{6}, std::size_t{1} << 20));
    sweep->add_option("--depth", sweep_depth, "Prefix length a witness must reach")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    constraint_flags(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            Word w = input_prefix(resolve_input(gen_input), gen_length, gen_direct);
            std::cout << format_word(w) << '\n';
        } else if (*sq) {
            Word w = input_prefix(resolve_input(sq_input), sq_length, false);
            write_report(std::cout, distinct_squares(w));
        } else if (*ver) {
            if (!has_construction(ver_name)) throw UsageError("unknown construction '" + ver_name + "'");
            VerifyReport rep = verify_construction(ver_name, ver_length, ver_opts);
            write_verify_report(std::cout, rep);
            return rep.pass ? kOk : kRuntime;
        } else if (*conv) {
            std::ifstream in(conv_file);
            std::ostringstream os;
            if (conv_dir == "morphic-to-dfao") {
                MorphicSystem sys = read_morphic_system(in);
                write_dfao(os, from_morphic(sys.morphism, sys.coding));
            } else {
                write_morphic_system(os, to_morphic(read_dfao(in)));
            }
            write_text(conv_out, os.str());
        } else if (*mini) {
            std::ifstream in(mini_file);
            write_text(mini_out, to_text(minimize(read_dfao(in))));
        } else if (*lex) {
            SearchConstraint c = make_constraint(max_order, max_squares, roots, window);
            LexleastOptions opts;
            if (trace) opts.trace = &std::cerr;
            SearchOutcome o = lexleast_search(lex_base, lex_states, c, lex_depth, opts);
            write_outcome(std::cout, o);
            save_witness(o, out_path);
            return outcome_code(o);
        } else if (*morph) {
            SearchConstraint c = make_constraint(max_order, max_squares, roots, window);
            MorphismSearchOptions opts;
            if (trace) opts.trace = &std::cerr;
            SearchOutcome o = morphism_weight_search(c, max_weight, opts);
            write_outcome(std::cout, o);
            save_witness(o, out_path);
            return outcome_code(o);
        } else if (*sweep) {
            SearchConstraint c = make_constraint(max_order, max_squares, roots, window);
            int code = kOk;
            for (const SweepEntry& e : ks_sweep(max_product, c, sweep_depth, threads)) {
                const SearchStats& s = e.outcome.stats;
                std::cout << "k=" << e.base << " s=" << e.states << " status=" << to_string(e.outcome.status)
                          << " nodes=" << s.nodes_expanded << " max_depth=" << s.max_depth << '\n';
                if (e.outcome.status == SearchStatus::budget_exceeded) code = kBudget;
            }
            return code;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
