#include "tangle/io.hpp"
#include "tangle/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace tangle {

namespace {

struct Token {
    std::string text;
    int column = 0;
};

std::vector<Token> split(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    InstanceDocument run() {
        std::istringstream in(text_);
        std::string line;
        while (std::getline(in, line)) {
            ++line_no_;
            toks_ = split(line);
            if (toks_.empty() || toks_[0].text[0] == '#') continue;
            statement();
        }
        finish();
        return std::move(doc_);
    }

private:
    [[noreturn]] void fail(const std::string& kind, int column, const std::string& msg) {
        throw ParseError(kind, line_no_, column, msg);
    }
    [[noreturn]] void syntax(std::size_t tok, const std::string& msg) {
        fail("syntax", tok < toks_.size() ? toks_[tok].column : end_column(), msg);
    }
    [[noreturn]] void semantic(std::size_t tok, const std::string& msg) {
        fail("semantic", tok < toks_.size() ? toks_[tok].column : end_column(), msg);
    }
    int end_column() const { return toks_.empty() ? 1 : toks_.back().column + static_cast<int>(toks_.back().text.size()); }

    long number(std::size_t tok) {
        if (tok >= toks_.size()) syntax(tok, "expected a number");
        const std::string& s = toks_[tok].text;
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < 0) syntax(tok, "expected a non-negative integer, got '" + s + "'");
        return v;
    }

    void arity(std::size_t n) {
        if (toks_.size() > n) syntax(n, "unexpected token '" + toks_[n].text + "'");
        if (toks_.size() < n) syntax(toks_.size(), "missing argument");
    }

    EdgeId edge_ref(std::size_t tok) {
        long e = number(tok);
        if (e >= kMaxIds || !doc_.graph.has_edge(static_cast<EdgeId>(e))) semantic(tok, "unknown edge " + std::to_string(e));
        return static_cast<EdgeId>(e);
    }

    VertexId vertex_ref(std::size_t tok) {
        long v = number(tok);
        if (!doc_.graph.has_vertex(static_cast<VertexId>(v))) semantic(tok, "unknown vertex " + std::to_string(v));
        return static_cast<VertexId>(v);
    }

    EdgeSet edge_list(std::size_t from) {
        EdgeSet s;
        for (std::size_t i = from; i < toks_.size(); ++i) s.set(edge_ref(i));
        return s;
    }

    EdgeSet cycle_list(std::size_t from) {
        if (toks_.size() <= from) syntax(from, "a cycle needs at least one edge");
        EdgeSet s = edge_list(from);
        if (!make_cycle(doc_.graph, s)) semantic(from, "edges do not form a cycle");
        return s;
    }

    void statement() {
        const std::string& kw = toks_[0].text;
        if (!seen_header_) {
            if (kw != "biasedgraph") syntax(0, "expected header 'biasedgraph 1'");
            arity(2);
            if (number(1) != 1) semantic(1, "unsupported format version");
            seen_header_ = true;
            return;
        }
        if (kw == "v") {
            if (seen_v_) semantic(0, "vertex count given twice");
            arity(2);
            long n = number(1);
            if (n > kMaxIds) semantic(1, "too many vertices");
            doc_.graph = MultiGraph(static_cast<int>(n));
            seen_v_ = true;
        } else if (kw == "e") {
            if (!seen_v_) syntax(0, "edge before the vertex count");
            if (seen_bias_) syntax(0, "edge after the bias record");
            arity(4);
            long id = number(1);
            if (id >= kMaxIds) semantic(1, "edge id too large");
            if (doc_.graph.has_edge(static_cast<EdgeId>(id))) semantic(1, "edge id " + std::to_string(id) + " repeats");
            VertexId u = vertex_ref(2), v = vertex_ref(3);
            doc_.graph.add_edge_with_id(static_cast<EdgeId>(id), u, v);
        } else if (kw == "bias") {
            if (!seen_v_) syntax(0, "bias before the vertex count");
            if (seen_bias_) semantic(0, "bias record given twice");
            if (toks_.size() < 2) syntax(1, "missing bias kind");
            seen_bias_ = true;
            bias_line_ = line_no_;
            const std::string& k = toks_[1].text;
            BiasRecord& b = doc_.bias;
            if (k == "signed") {
                b.kind = BiasRecord::Kind::Signed;
                b.signature = edge_list(2);
            } else if (k == "explicit" || k == "partial" || k == "all-balanced" || k == "all-unbalanced") {
                arity(2);
                b.kind = k == "explicit"     ? BiasRecord::Kind::Explicit
                         : k == "partial"    ? BiasRecord::Kind::Partial
                         : k == "all-balanced" ? BiasRecord::Kind::AllBalanced
                                               : BiasRecord::Kind::AllUnbalanced;
            } else {
                syntax(1, "unknown bias kind '" + k + "'");
            }
        } else if (kw == "bal" || kw == "unbal") {
            const auto k = doc_.bias.kind;
            if (!seen_bias_ || (k != BiasRecord::Kind::Explicit && k != BiasRecord::Kind::Partial) ||
                (kw == "unbal" && k != BiasRecord::Kind::Partial))
                syntax(0, "'" + kw + "' outside an explicit or partial bias");
            if (seen_family_) syntax(0, "'" + kw + "' after the family record");
            EdgeSet c = cycle_list(1);
            if (kw == "bal") {
                bal_lines_.emplace(c, line_no_);
                doc_.bias.balanced.push_back(c);
            } else {
                doc_.bias.unbalanced.push_back(c);
            }
        } else if (kw == "default") {
            if (!seen_bias_ || doc_.bias.kind != BiasRecord::Kind::Partial) syntax(0, "'default' outside a partial bias");
            arity(2);
            if (toks_[1].text == "balanced")
                doc_.bias.fallback = Bias::Balanced;
            else if (toks_[1].text == "unbalanced")
                doc_.bias.fallback = Bias::Unbalanced;
            else
                syntax(1, "expected 'balanced' or 'unbalanced'");
        } else if (kw == "family") {
            if (!seen_bias_) syntax(0, "family before the bias record");
            if (seen_family_) semantic(0, "family given twice");
            arity(2);
            auto kind = family_from_name(toks_[1].text);
            if (!kind) semantic(1, "unknown family '" + toks_[1].text + "'");
            seen_family_ = true;
            doc_.family = FamilyDescriptor{};
            doc_.family->kind = *kind;
        } else if (kw == "role") {
            if (!seen_family_) syntax(0, "role before the family record");
            role();
        } else {
            syntax(0, "unknown statement '" + kw + "'");
        }
    }

    void role() {
        if (toks_.size() < 2) syntax(1, "missing role kind");
        FamilyDescriptor& d = *doc_.family;
        const std::string& k = toks_[1].text;
        auto named = [&]() -> std::string {
            if (toks_.size() < 3) syntax(2, "missing role name");
            return toks_[2].text;
        };
        auto fresh = [&](const auto& map, const std::string& name) {
            if (map.count(name)) semantic(2, "role " + name + " given twice");
        };
        auto once = [&](bool empty) {
            if (!empty) semantic(1, "role " + k + " given twice");
        };
        if (k == "v") {
            std::string n = named();
            fresh(d.v, n);
            arity(4);
            d.v[n] = vertex_ref(3);
        } else if (k == "e") {
            std::string n = named();
            fresh(d.e, n);
            arity(4);
            d.e[n] = edge_ref(3);
        } else if (k == "vs") {
            std::string n = named();
            fresh(d.vs, n);
            VertexSet s;
            for (std::size_t i = 3; i < toks_.size(); ++i) s.set(vertex_ref(i));
            d.vs[n] = s;
        } else if (k == "es") {
            std::string n = named();
            fresh(d.es, n);
            d.es[n] = edge_list(3);
        } else if (k == "seq") {
            once(d.sequence.empty());
            for (std::size_t i = 2; i < toks_.size(); ++i) d.sequence.push_back(edge_ref(i));
        } else if (k == "pairing") {
            once(d.pairing.empty());
            for (std::size_t i = 2; i < toks_.size(); ++i) d.pairing.push_back(vertex_ref(i));
        } else if (k == "index") {
            once(d.index.empty());
            for (std::size_t i = 2; i < toks_.size(); ++i) d.index.push_back(static_cast<int>(number(i)));
        } else if (k == "mults") {
            once(d.mults.empty());
            for (std::size_t i = 2; i < toks_.size(); ++i) d.mults.push_back(static_cast<int>(number(i)));
        } else {
            syntax(1, "unknown role kind '" + k + "'");
        }
    }

    void finish() {
        ++line_no_;
        toks_.clear();
        if (!seen_header_) fail("syntax", 1, "missing header 'biasedgraph 1'");
        if (!seen_v_) fail("syntax", 1, "missing vertex count");
        if (!seen_bias_) fail("syntax", 1, "missing bias record");
        BiasRecord& b = doc_.bias;
        auto canon = [](std::vector<EdgeSet>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        canon(b.balanced);
        canon(b.unbalanced);
        line_no_ = bias_line_;
        if (b.kind == BiasRecord::Kind::Explicit) {
            ThetaCheck t = validate_theta(doc_.graph, b.balanced);
            if (!t.ok) {
                const Theta& th = *t.violation;
                auto ids = [](const Cycle& c) {
                    std::string s;
                    for (EdgeId e : c.edges.to_vector()) s += (s.empty() ? "" : " ") + std::to_string(e);
                    return "{" + s + "}";
                };
                line_no_ = bal_lines_.count(th.a.edges) ? bal_lines_[th.a.edges] : bias_line_;
                fail("semantic", 1,
                     "theta violation: " + ids(th.a) + " and " + ids(th.b) + " are balanced but " + ids(th.c) + " is not");
            }
        }
        if (b.kind == BiasRecord::Kind::Partial) {
            for (const EdgeSet& c : b.unbalanced)
                if (std::binary_search(b.balanced.begin(), b.balanced.end(), c))
                    fail("semantic", 1, "a cycle is listed as both balanced and unbalanced");
            if (!to_partial_completion()) fail("semantic", 1, "the partial bias admits no completion");
        }
        if (doc_.family) doc_.family->graph = doc_.graph;
    }

    bool to_partial_completion() {
        PartialBias p;
        for (const EdgeSet& c : doc_.bias.balanced) p[c] = Bias::Balanced;
        for (const EdgeSet& c : doc_.bias.unbalanced) p[c] = Bias::Unbalanced;
        return complete_bias(doc_.graph, p, doc_.bias.fallback).has_value();
    }

    const std::string& text_;
    InstanceDocument doc_;
    std::vector<Token> toks_;
    int line_no_ = 0;
    int bias_line_ = 0;
    bool seen_header_ = false, seen_v_ = false, seen_bias_ = false, seen_family_ = false;
    std::map<EdgeSet, int> bal_lines_;
};

void put_ids(std::ostringstream& os, const IdSet& s) { s.for_each([&](int i) { os << ' ' << i; }); }

template <class V>
void put_list(std::ostringstream& os, const V& v) {
    for (auto x : v) os << ' ' << x;
}

}  // namespace

InstanceDocument parse(const std::string& text) { return Parser(text).run(); }

std::string serialize(const InstanceDocument& doc) {
    std::ostringstream os;
    const MultiGraph& g = doc.graph;
    os << "biasedgraph " << doc.version << '\n';
    os << "v " << g.vertex_bound() << '\n';
    for (EdgeId e : g.edges()) os << "e " << e << ' ' << g.edge(e).u << ' ' << g.edge(e).v << '\n';
    const BiasRecord& b = doc.bias;
    std::vector<EdgeSet> bal = b.balanced, unbal = b.unbalanced;
    std::sort(bal.begin(), bal.end());
    std::sort(unbal.begin(), unbal.end());
    switch (b.kind) {
        case BiasRecord::Kind::Signed:
            os << "bias signed";
            put_ids(os, b.signature);
            os << '\n';
            break;
        case BiasRecord::Kind::Explicit:
            os << "bias explicit\n";
            for (const EdgeSet& c : bal) {
                os << "bal";
                put_ids(os, c);
                os << '\n';
            }
            break;
        case BiasRecord::Kind::AllBalanced: os << "bias all-balanced\n"; break;
        case BiasRecord::Kind::AllUnbalanced: os << "bias all-unbalanced\n"; break;
        case BiasRecord::Kind::Partial:
            os << "bias partial\n";
            for (const EdgeSet& c : bal) {
                os << "bal";
                put_ids(os, c);
                os << '\n';
            }
            for (const EdgeSet& c : unbal) {
                os << "unbal";
                put_ids(os, c);
                os << '\n';
            }
            os << "default " << (b.fallback == Bias::Balanced ? "balanced" : "unbalanced") << '\n';
            break;
    }
    if (doc.family) {
        const FamilyDescriptor& d = *doc.family;
        os << "family " << family_name(d.kind) << '\n';
        for (const auto& [n, v] : d.v) os << "role v " << n << ' ' << v << '\n';
        for (const auto& [n, e] : d.e) os << "role e " << n << ' ' << e << '\n';
        for (const auto& [n, s] : d.vs) {
            os << "role vs " << n;
            put_ids(os, s);
            os << '\n';
        }
        for (const auto& [n, s] : d.es) {
            os << "role es " << n;
            put_ids(os, s);
            os << '\n';
        }
        auto list = [&](const char* name, const auto& v) {
            if (v.empty()) return;
            os << "role " << name;
            put_list(os, v);
            os << '\n';
        };
        list("seq", d.sequence);
        list("pairing", d.pairing);
        list("index", d.index);
        list("mults", d.mults);
    }
    return os.str();
}

BiasedGraph to_biased(const InstanceDocument& doc) {
    const BiasRecord& b = doc.bias;
    switch (b.kind) {
        case BiasRecord::Kind::Signed: return make_signed(doc.graph, b.signature);
        case BiasRecord::Kind::Explicit: return make_explicit(doc.graph, b.balanced);
        case BiasRecord::Kind::AllBalanced: return BiasedGraph(doc.graph, AllBalanced{});
        case BiasRecord::Kind::AllUnbalanced: return BiasedGraph(doc.graph, AllUnbalanced{});
        case BiasRecord::Kind::Partial: {
            PartialBias p;
            for (const EdgeSet& c : b.balanced) p[c] = Bias::Balanced;
            for (const EdgeSet& c : b.unbalanced) p[c] = Bias::Unbalanced;
            auto o = complete_bias(doc.graph, p, b.fallback);
            if (!o) throw PreconditionError("infeasible", "the partial bias admits no completion");
            return *o;
        }
    }
    throw std::logic_error("unknown bias kind");
}

InstanceDocument from_biased(const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    if (g.vertex_bound() != g.num_vertices())
        throw PreconditionError("vertex-holes", "documents need vertices numbered 0..n-1");
    InstanceDocument doc;
    doc.graph = g;
    BiasRecord& b = doc.bias;
    if (const auto* s = std::get_if<SignedBias>(&o.spec())) {
        b.kind = BiasRecord::Kind::Signed;
        b.signature = s->signature & g.edge_set();
    } else if (std::holds_alternative<AllBalanced>(o.spec())) {
        b.kind = BiasRecord::Kind::AllBalanced;
    } else if (std::holds_alternative<AllUnbalanced>(o.spec())) {
        b.kind = BiasRecord::Kind::AllUnbalanced;
    } else {
        b.kind = BiasRecord::Kind::Explicit;
        BiasedGraph c = o.compacted();
        for (const EdgeSet& cyc : std::get<ExplicitBias>(c.spec()).balanced) b.balanced.push_back(cyc);
        std::sort(b.balanced.begin(), b.balanced.end());
    }
    return doc;
}

// ------------------------------------------------------------------ DOT

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + '"';
}

EdgeSet balanced_part(const FamilyDescriptor& d) {
    EdgeSet out;
    for (const auto& [n, s] : d.es) {
        bool part = n[0] == 'H' || n == "B" || (d.kind == FamilyKind::GeneralizedWheel && n[0] == 'G');
        if (part) out |= s;
    }
    return out;
}

}  // namespace

std::string export_dot(const BiasedGraph& o, const ClassificationReport* report) {
    const MultiGraph& g = o.graph();
    std::map<VertexId, std::vector<std::string>> vroles;
    std::map<EdgeId, std::vector<std::string>> eroles;
    std::optional<EdgeSet> balanced;
    std::string title;
    if (report)
        for (const auto& l : report->labels) {
            if (l.certificate) {
                const FamilyDescriptor& d = l.certificate->descriptor;
                for (const auto& [n, v] : d.v) vroles[v].push_back(n);
                for (const auto& [n, s] : d.vs) s.for_each([&, n = n](int v) { vroles[v].push_back(n); });
                for (const auto& [n, e] : d.e) eroles[e].push_back(n);
                for (const auto& [n, s] : d.es) s.for_each([&, n = n](int e) { eroles[e].push_back(n); });
                for (std::size_t i = 0; i < d.sequence.size(); ++i) eroles[d.sequence[i]].push_back("f" + std::to_string(i + 1));
                if (d.kind != FamilyKind::K5Parallel) balanced = balanced_part(d);
                title = l.label + " " + family_name(d.kind);
                break;
            }
            if (l.sum && !l.sum->steps.empty()) {
                EdgeSet side;
                for (EdgeId e : l.sum->steps[0].balanced.graph().edges())
                    if (g.has_edge(e)) side.set(e);
                balanced = side;
                title = l.label + " " + std::to_string(l.sum->steps[0].t) + "-sum";
                break;
            }
        }
    EdgeSet dashed;
    if (const auto* s = std::get_if<SignedBias>(&o.spec())) dashed = s->signature;
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
        return s;
    };
    std::ostringstream os;
    os << "graph biased {\n";
    if (!title.empty()) os << "  label=" << quoted(title) << ";\n";
    os << "  node [shape=circle];\n";
    for (VertexId v : g.vertices()) {
        std::string label = std::to_string(v);
        if (vroles.count(v)) label += "\\n" + join(vroles[v]);
        os << "  v" << v << " [label=" << quoted(label) << "];\n";
    }
    for (EdgeId e : g.edges()) {
        std::string label = "e" + std::to_string(e);
        if (eroles.count(e)) label += " " + join(eroles[e]);
        os << "  v" << g.edge(e).u << " -- v" << g.edge(e).v << " [label=" << quoted(label);
        if (dashed.test(e)) os << ", style=dashed";
        if (balanced && !balanced->test(e)) os << ", penwidth=2.5, color=red";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace tangle
