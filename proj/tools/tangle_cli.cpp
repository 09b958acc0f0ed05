#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tangle/classify.hpp"
#include "tangle/config.hpp"
#include "tangle/io.hpp"
#include "tangle/linkage.hpp"

using namespace tangle;

namespace {

enum Exit { kOk = 0, kVerdict = 1, kInput = 2, kResource = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

std::string ids(const IdSet& s) {
    std::string out;
    s.for_each([&](int i) { out += (out.empty() ? "" : " ") + std::to_string(i); });
    return out;
}

std::string path_text(const Path& p) {
    std::string out;
    for (VertexId v : p.verts) out += (out.empty() ? "" : " ") + std::to_string(v);
    return out;
}

std::string verdict_text(const TangleVerdict& v) {
    switch (v.kind) {
        case TangleVerdict::Kind::Tangled: return "tangled";
        case TangleVerdict::Kind::Balanced: return "not tangled: balanced";
        case TangleVerdict::Kind::HasBlockingVertex: return "not tangled: blocking vertex " + std::to_string(v.blocking);
        case TangleVerdict::Kind::TwoDisjointUnbalanced:
            return "not tangled: disjoint unbalanced cycles {" + ids(v.first->edges) + "} {" + ids(v.second->edges) + "}";
    }
    return "";
}

void print_roles(std::ostream& os, const FamilyDescriptor& d) {
    InstanceDocument doc;
    doc.graph = d.graph;
    doc.family = d;
    std::istringstream lines(serialize(doc));
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("role ", 0) == 0) os << "  " << line << '\n';
}

struct Options {
    std::string file = "-";
    bool oracle = false;
};

// The unbalanced component when o is tangled; classify needs connected input.
BiasedGraph tangled_part(const BiasedGraph& o) {
    auto comps = components(o.graph());
    if (comps.size() <= 1) return o;
    for (const VertexSet& c : comps) {
        BiasedGraph part = o.induced(c);
        if (!unbalanced_cycles(part).empty()) return part;
    }
    return o;
}

TangleVerdict verdict(const BiasedGraph& o, bool oracle) { return oracle ? oracle_is_tangled(o) : is_tangled(o); }

int cmd_validate(const Options& opt) {
    InstanceDocument doc = parse(read_input(opt.file));
    BiasedGraph o = to_biased(doc);
    ThetaCheck t = validate_theta(o);
    if (!t.ok) {
        std::cout << "theta violation\n";
        return kVerdict;
    }
    std::cout << "valid: " << o.graph().num_vertices() << " vertices, " << o.graph().num_edges() << " edges\n";
    if (doc.family) {
        Certificate c = verify_family(o, *doc.family);
        for (const ClauseResult& r : c.clauses)
            std::cout << (r.ok ? "  ok   " : "  FAIL ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << '\n';
        std::cout << family_name(doc.family->kind) << (c.ok() ? " verified" : " rejected") << '\n';
        if (!c.ok()) return kVerdict;
    }
    return kOk;
}

int cmd_tangled(const Options& opt) {
    BiasedGraph o = to_biased(parse(read_input(opt.file)));
    TangleVerdict v = verdict(o, opt.oracle);
    std::cout << verdict_text(v) << '\n';
    return v.tangled() ? kOk : kVerdict;
}

int cmd_classify(const Options& opt, const std::string& labels) {
    BiasedGraph o = simplify(to_biased(parse(read_input(opt.file))));
    TangleVerdict v = verdict(o, opt.oracle);
    if (!v.tangled()) {
        std::cout << verdict_text(v) << '\n';
        return kVerdict;
    }
    BiasedGraph part = tangled_part(o);
    ClassificationReport r = classify(part, labels == "first" ? LabelMode::First : LabelMode::All);
    std::string bad = verify_report(part, r);
    if (!bad.empty()) throw std::logic_error("report failed verification: " + bad);
    std::cout << "tangled\n";
    for (const LabelMatch& l : r.labels) {
        if (l.certificate) {
            std::cout << "label " << l.label << ' ' << family_name(l.certificate->descriptor.kind) << '\n';
            print_roles(std::cout, l.certificate->descriptor);
        } else if (l.sum) {
            std::cout << "label " << l.label << ' ' << l.sum->steps.front().t << "-sum, " << l.sum->steps.size()
                      << " step(s), core " << core_kind_name(l.sum->core_kind) << '\n';
        }
    }
    return r.labels.empty() ? kVerdict : kOk;
}

int cmd_decompose(const Options& opt) {
    BiasedGraph o = simplify(to_biased(parse(read_input(opt.file))));
    TangleVerdict v = verdict(o, opt.oracle);
    if (!v.tangled()) {
        std::cout << verdict_text(v) << '\n';
        return kVerdict;
    }
    BiasedGraph part = tangled_part(o);
    SumDecomposition d = decompose(part);
    std::string bad = check_decomposition(part, d);
    if (!bad.empty()) throw std::logic_error("decomposition failed verification: " + bad);
    for (const SumStep& s : d.steps) {
        std::string joint;
        for (VertexId x : s.joint) joint += " " + std::to_string(x);
        std::cout << "step " << s.t << "-sum at" << joint << ": balanced side with " << s.balanced.graph().num_vertices()
                  << " vertices, " << s.balanced.graph().num_edges() << " edges\n";
    }
    std::cout << "core " << core_kind_name(d.core_kind) << ": vertices " << ids(d.core.graph().vertex_set()) << '\n';
    if (d.wheel) print_roles(std::cout, d.wheel->descriptor);
    return kOk;
}

int cmd_generate(const std::string& family, int setting, const std::vector<int>& mults) {
    auto kind = family_from_name(family);
    if (!kind) throw InputError("unknown family '" + family + "'");
    FamilyDescriptor d;
    if (!mults.empty()) {
        if (*kind != FamilyKind::K5Parallel) throw InputError("--mults applies to k5 only");
        d = k5_descriptor(mults);
    } else {
        if (setting < 0 || setting >= kExampleSettings)
            throw InputError("setting must be in [0, " + std::to_string(kExampleSettings) + ")");
        d = example_descriptor(*kind, setting);
    }
    InstanceDocument doc = from_biased(build_family(d));
    doc.family = d;
    std::cout << serialize(doc);
    return kOk;
}

int cmd_linkage(const Options& opt, const std::string& spec) {
    std::vector<int> t;
    std::istringstream in(spec);
    for (std::string tok; std::getline(in, tok, ',');) {
        int v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) throw InputError("bad terminal '" + tok + "'");
        t.push_back(v);
    }
    MultiGraph g = parse(read_input(opt.file)).graph;
    if (t.size() != 4) throw InputError("--terminals needs four vertices");
    for (int i = 0; i < 4; ++i) {
        if (!g.has_vertex(t[i])) throw InputError("terminal " + std::to_string(t[i]) + " is not a vertex");
        for (int j = 0; j < i; ++j)
            if (t[i] == t[j]) throw InputError("terminals must be distinct");
    }
    if (opt.oracle) {
        auto l = search_linkage(g, t[0], t[1], t[2], t[3]);
        if (!l) {
            std::cout << "no linkage\n";
            return kVerdict;
        }
        std::cout << "linkage\n  p1: " << path_text(l->p1) << "\n  p2: " << path_text(l->p2) << '\n';
        return kOk;
    }
    LinkageOutcome out = find_linkage(g, t[0], t[1], t[2], t[3]);
    if (const auto* l = std::get_if<Linkage>(&out)) {
        std::cout << "linkage\n  p1: " << path_text(l->p1) << "\n  p2: " << path_text(l->p2) << '\n';
        return kOk;
    }
    const auto& w = std::get<ThreePlanarWitness>(out);
    std::cout << "no linkage; 3-planar witness\n";
    for (const VertexSet& s : w.sets) std::cout << "  set " << ids(s) << '\n';
    std::cout << "  order";
    for (VertexId v : w.order) std::cout << ' ' << v;
    std::cout << '\n';
    return kVerdict;
}

int cmd_dot(const Options& opt, bool with_report) {
    BiasedGraph o = to_biased(parse(read_input(opt.file)));
    std::optional<ClassificationReport> r;
    if (with_report) {
        BiasedGraph s = simplify(o);
        if (verdict(s, opt.oracle).tangled() && is_connected(s.graph())) {
            o = s;
            r = classify(o, LabelMode::First);
        }
    }
    std::cout << export_dot(o, r ? &*r : nullptr);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tangled biased graph toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    long cap = 0;
    app.add_option("--cap", cap, "Ceiling for cycle enumeration and searches")->check(CLI::PositiveNumber);
    app.add_flag("--oracle", opt.oracle, "Use the brute-force path");

    auto file_arg = [&](CLI::App* sub) { sub->add_option("file", opt.file, "Instance file, or - for standard input"); };

    auto* validate = app.add_subcommand("validate", "Parse and check an instance");
    file_arg(validate);
    auto* tangled = app.add_subcommand("tangled", "Decide whether the instance is tangled");
    file_arg(tangled);
    std::string labels = "all";
    auto* classify_cmd = app.add_subcommand("classify", "Structure labels of a tangled instance");
    classify_cmd->add_option("--labels", labels)->check(CLI::IsMember({"all", "first"}));
    file_arg(classify_cmd);
    auto* decompose_cmd = app.add_subcommand("decompose", "Split off balanced summands");
    file_arg(decompose_cmd);
    std::string family;
    int setting = 0;
    std::vector<int> mults;
    auto* generate = app.add_subcommand("generate", "Print a family member");
    generate->add_option("family", family)->required();
    generate->add_option("--setting", setting);
    generate->add_option("--mults", mults)->delimiter(',')->expected(10);
    std::string terminals;
    auto* linkage = app.add_subcommand("linkage", "Two disjoint paths or a 3-planar witness");
    linkage->add_option("--terminals", terminals, "s1,t1,s2,t2")->required();
    file_arg(linkage);
    bool with_report = false;
    auto* dot = app.add_subcommand("dot", "Graphviz rendering");
    dot->add_flag("--classify", with_report, "Annotate the first certified label");
    file_arg(dot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (!load_limits_from_env()) throw InputError("malformed TANGLE_CYCLE_CAP");
        if (cap > 0) {
            limits().cycle_cap = static_cast<std::size_t>(cap);
            limits().search_cap = static_cast<std::size_t>(cap);
        }
        if (*validate) return cmd_validate(opt);
        if (*tangled) return cmd_tangled(opt);
        if (*classify_cmd) return cmd_classify(opt, labels);
        if (*decompose_cmd) return cmd_decompose(opt);
        if (*generate) return cmd_generate(family, setting, mults);
        if (*linkage) return cmd_linkage(opt, terminals);
        if (*dot) return cmd_dot(opt, with_report);
    } catch (const ParseError& e) {
        std::cerr << e.kind() << " error: " << e.what() << '\n';
        return kInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const PreconditionError& e) {
        std::cerr << e.kind() << ": " << e.what() << '\n';
        return e.kind() == "infeasible" ? kVerdict : kInput;
    }
    return kInput;
}
