// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tangle/classify.hpp"
#include "tangle/config.hpp"
#include "tangle/io.hpp"
#include "tangle/linkage.hpp"

using namespace tangle;

namespace {

// Wall-clock ceilings in seconds and sample sizes.
constexpr double kLimit1 = 60, kLimit2 = 600, kLimit3 = 300, kLimit4 = 300, kLimit5 = 120, kLimit6 = 1800,
                 kLimit7 = 300, kLimit8 = 10;
constexpr int kSigned1 = 500, kExplicit1 = 500, kSums4 = 100, kRecoveries5 = 200, kAgreement7 = 1000;

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Connected simple graphs on n vertices, one per isomorphism class.
std::vector<MultiGraph> connected_classes(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    const int p = static_cast<int>(pairs.size());
    std::vector<std::vector<int>> index(n, std::vector<int>(n));
    for (int i = 0; i < p; ++i) index[pairs[i].first][pairs[i].second] = index[pairs[i].second][pairs[i].first] = i;
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<MultiGraph> out;
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        bool least = true;
        for (const auto& q : perms) {
            unsigned img = 0;
            for (int i = 0; i < p; ++i)
                if (mask >> i & 1) img |= 1u << index[q[pairs[i].first]][q[pairs[i].second]];
            if (img < mask) {
                least = false;
                break;
            }
        }
        if (!least) continue;
        MultiGraph g(n);
        for (int i = 0; i < p; ++i)
            if (mask >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
        if (is_connected(g)) out.push_back(std::move(g));
    }
    return out;
}

// A theta-valid bias that need not be signed: a few random cycles fixed,
// the rest completed.
std::optional<BiasedGraph> random_completed(std::mt19937& rng, const MultiGraph& g) {
    auto cycles = oracle::cycles_by_subsets(g);
    if (cycles.empty()) return BiasedGraph(g, AllBalanced{});
    PartialBias partial;
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < k; ++i)
        partial[cycles[std::uniform_int_distribution<std::size_t>(0, cycles.size() - 1)(rng)]] =
            rng() % 2 ? Bias::Balanced : Bias::Unbalanced;
    return complete_bias(g, partial, rng() % 2 ? Bias::Balanced : Bias::Unbalanced);
}

Outcome theta_soundness() {
    std::mt19937 rng(101);
    for (int i = 0; i < kSigned1; ++i) {
        int n = 2 + i % 7;
        MultiGraph g = oracle::random_connected(rng, n, static_cast<int>(rng() % (n <= 5 ? 7 : 5)));
        BiasedGraph o = make_signed(g, oracle::random_subset(rng, g.edge_set(), 0.4));
        const auto& set = o.to_explicit().balanced;
        std::vector<EdgeSet> bal(set.begin(), set.end());
        if (!validate_theta(g, bal).ok) return {false, "signed sample " + std::to_string(i) + " fails validate_theta"};
    }
    int violations = 0;
    for (int i = 0; i < kExplicit1; ++i) {
        MultiGraph g = oracle::random_connected(rng, 3 + i % 4, static_cast<int>(rng() % 5));
        std::vector<EdgeSet> cycles = oracle::cycles_by_subsets(g);
        std::vector<EdgeSet> bal;
        if (i % 2 == 0) {
            for (const EdgeSet& c : cycles)
                if (rng() % 3) bal.push_back(c);
        } else {
            BiasedGraph o = make_signed(g, oracle::random_subset(rng, g.edge_set(), 0.4));
            const auto& set = o.to_explicit().balanced;
            bal.assign(set.begin(), set.end());
            if (!cycles.empty()) {
                const EdgeSet& flip = cycles[rng() % cycles.size()];
                auto it = std::find(bal.begin(), bal.end(), flip);
                if (it == bal.end())
                    bal.push_back(flip);
                else
                    bal.erase(it);
            }
        }
        bool got = validate_theta(g, bal).ok;
        bool want = oracle::theta_by_definition(BiasedGraph(g, ExplicitBias{{bal.begin(), bal.end()}}));
        if (got != want) return {false, "explicit sample " + std::to_string(i) + " disagrees with the theta count"};
        violations += !want;
    }
    return {true, std::to_string(kSigned1) + " signed, " + std::to_string(kExplicit1) + " explicit (" +
                      std::to_string(violations) + " with a violation)"};
}

Outcome linkage_dichotomy() {
    long calls = 0, witnesses = 0, graphs = 0;
    for (int n = 4; n <= 6; ++n)
        for (const MultiGraph& g : connected_classes(n)) {
            ++graphs;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) {
                            if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                            ++calls;
                            bool want = oracle::linkage_by_partition(g, a, b, c, d);
                            LinkageOutcome out = find_linkage(g, a, b, c, d);
                            std::string where = " on a " + std::to_string(n) + "-vertex graph, terminals " +
                                                std::to_string(a) + std::to_string(b) + std::to_string(c) +
                                                std::to_string(d);
                            if (const auto* l = std::get_if<Linkage>(&out)) {
                                if (!want) return {false, "linkage reported where none exists" + where};
                                if (!verify_linkage(g, *l, a, b, c, d)) return {false, "invalid linkage" + where};
                            } else {
                                ++witnesses;
                                if (want) return {false, "witness reported where a linkage exists" + where};
                                WitnessCheck w = verify_witness(g, std::get<ThreePlanarWitness>(out), {a, c, b, d});
                                if (!w.ok) return {false, "witness rejected (" + w.defect + ")" + where};
                            }
                        }
        }
    return {true, std::to_string(graphs) + " graphs, " + std::to_string(calls) + " quadruples, " +
                      std::to_string(witnesses) + " witnesses"};
}

Outcome family_tangledness() {
    int checked = 0;
    for (FamilyKind k : kAllFamilies)
        for (int s = 0; s < kExampleSettings; ++s) {
            FamilyDescriptor d = example_descriptor(k, s);
            BiasedGraph o = build_family(d);
            std::string where = std::string(family_name(k)) + " setting " + std::to_string(s);
            if (!oracle_is_tangled(o).tangled()) return {false, where + " is not tangled"};
            Certificate c = verify_family(o, d);
            if (!c.ok()) return {false, where + " fails " + c.failure()};
            ++checked;
        }
    return {true, std::to_string(checked) + " instances"};
}

Outcome sum_laws() {
    std::mt19937 rng(404);
    int done = 0, attempts = 0;
    std::array<int, 4> per_t{};
    while (done < kSums4) {
        if (++attempts > 100 * kSums4) return {false, "generator exhausted after " + std::to_string(done) + " sums"};
        int n = std::uniform_int_distribution<int>(4, 6)(rng);
        MultiGraph g = oracle::random_connected(rng, n, std::uniform_int_distribution<int>(3, 8)(rng), false);
        BiasedGraph core = make_signed(g, oracle::random_subset(rng, g.edge_set(), 0.4));
        if (rng() % 2) core = BiasedGraph(g, core.to_explicit());
        if (!is_tangled(core).tangled()) continue;
        int t = 1 + done % 3;
        std::vector<VertexId> joint;
        std::vector<EdgeId> kt1;
        if (t == 1) {
            joint = {static_cast<VertexId>(rng() % n)};
        } else if (t == 2) {
            EdgeId e = g.edges()[rng() % g.num_edges()];
            joint = {g.edge(e).u, g.edge(e).v};
            kt1 = {e};
        } else {
            std::vector<std::array<VertexId, 3>> tris;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    for (int c = b + 1; c < n; ++c) {
                        EdgeSet tri = g.edges_between(a, b) | g.edges_between(b, c) | g.edges_between(a, c);
                        if (tri.count() == 3 && core.is_balanced(tri)) tris.push_back({a, b, c});
                    }
            if (tris.empty()) continue;
            auto tri = tris[rng() % tris.size()];
            joint.assign(tri.begin(), tri.end());
            kt1 = {g.edges_between(joint[0], joint[1]).first(), g.edges_between(joint[1], joint[2]).first(),
                   g.edges_between(joint[0], joint[2]).first()};
        }
        int lo = std::max(t + 1, min_balanced_side(t, limits().sum_threshold));
        int hi = std::min(t + 3, 9 - n + t);
        if (lo > hi) continue;
        int s = std::uniform_int_distribution<int>(lo, hi)(rng);
        MultiGraph k = oracle::complete(s);
        EdgeSet cut;
        VertexSet side = oracle::random_subset(rng, k.vertex_set());
        cut = k.delta(side);
        BiasedGraph part = make_signed(k, cut);
        SumGlue glue;
        for (int i = 0; i < t; ++i) glue.verts.push_back({joint[i], i});
        if (t == 2) glue.kt = {{kt1[0], k.edges_between(0, 1).first()}};
        if (t == 3)
            glue.kt = {{kt1[0], k.edges_between(0, 1).first()},
                       {kt1[1], k.edges_between(1, 2).first()},
                       {kt1[2], k.edges_between(0, 2).first()}};
        BiasedGraph sum = t_sum(core, part, t, glue).sum;
        std::string where = " on sum " + std::to_string(done) + " (t=" + std::to_string(t) + ")";
        if (!validate_theta(sum).ok) return {false, "theta violation" + where};
        if (!oracle_is_tangled(sum).tangled()) return {false, "oracle says not tangled" + where};
        SumDecomposition d = decompose(sum);
        std::string bad = check_decomposition(sum, d);
        if (!bad.empty()) return {false, bad + where};
        BiasedGraph back = recompose(d);
        if (!(back.graph() == sum.graph())) return {false, "recomposed graph differs" + where};
        for (const Cycle& c : enumerate_cycles(sum.graph()))
            if (back.is_balanced(c.edges) != sum.is_balanced(c.edges)) return {false, "cycle bias differs" + where};
        ++per_t[t];
        ++done;
    }
    return {true, std::to_string(per_t[1]) + "/" + std::to_string(per_t[2]) + "/" + std::to_string(per_t[3]) +
                      " sums for t=1/2/3"};
}

// Greedy maximal balanced edge set grown from a spanning tree.
EdgeSet maximal_balanced(std::mt19937& rng, const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    EdgeSet base;
    std::vector<int> seen(g.vertex_bound(), 0);
    std::vector<VertexId> q{g.vertices().front()};
    seen[q[0]] = 1;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (EdgeId e : g.incident(q[i]))
            if (VertexId w = g.other(e, q[i]); !seen[w]) {
                seen[w] = 1;
                base.set(e);
                q.push_back(w);
            }
    std::vector<EdgeId> rest;
    for (EdgeId e : g.edges())
        if (!base.test(e)) rest.push_back(e);
    std::shuffle(rest.begin(), rest.end(), rng);
    for (EdgeId e : rest) {
        EdgeSet next = base;
        next.set(e);
        bool ok = true;
        for (const EdgeSet& c : oracle::cycles_by_subsets(g.spanning_with(next)))
            if (c.test(e) && !o.is_balanced(c)) ok = false;
        if (ok) base = next;
    }
    return base;
}

Outcome signature_recovery() {
    std::mt19937 rng(505);
    int done = 0, attempts = 0, completed = 0;
    while (done < kRecoveries5) {
        if (++attempts > 200 * kRecoveries5) return {false, "generator exhausted after " + std::to_string(done)};
        int n = std::uniform_int_distribution<int>(3, 7)(rng);
        MultiGraph g = oracle::random_connected(rng, n, std::uniform_int_distribution<int>(1, 6)(rng));
        std::optional<BiasedGraph> o;
        bool from_completion = attempts % 2 == 0;
        if (from_completion) {
            o = random_completed(rng, g);
        } else {
            BiasedGraph s = make_signed(g, oracle::random_subset(rng, g.edge_set(), 0.35));
            o = BiasedGraph(g, s.to_explicit());
        }
        if (!o || find_disjoint_unbalanced_pair(*o)) continue;
        EdgeSet base = maximal_balanced(rng, *o);
        EdgeSet f = g.edge_set() - base;
        if (f.empty() || !is_2_balanced(*o, base, f).ok) continue;
        SignatureRecovery r = recover_signature(*o, base, f);
        std::string where = " on instance " + std::to_string(done);
        if (!r.ok) return {false, "recovery failed" + where};
        for (const EdgeSet& c : oracle::cycles_by_subsets(g))
            if (o->is_balanced(c) != ((c & r.signature).count() % 2 == 0)) return {false, "parity law fails" + where};
        completed += from_completion;
        ++done;
    }
    return {true, std::to_string(done) + " instances (" + std::to_string(completed) + " from random completions)"};
}

Outcome completeness() {
    long total = 0, tangled = 0;
    for (int n = 3; n <= 6; ++n)
        for (const MultiGraph& g : connected_classes(n)) {
            EdgeSet tree;
            std::vector<int> seen(n, 0);
            std::vector<VertexId> q{0};
            seen[0] = 1;
            for (std::size_t i = 0; i < q.size(); ++i)
                for (EdgeId e : g.incident(q[i]))
                    if (VertexId w = g.other(e, q[i]); !seen[w]) {
                        seen[w] = 1;
                        tree.set(e);
                        q.push_back(w);
                    }
            std::vector<EdgeId> co;
            for (EdgeId e : g.edges())
                if (!tree.test(e)) co.push_back(e);
            for (unsigned s = 0; s < (1u << co.size()); ++s) {
                EdgeSet sig;
                for (std::size_t i = 0; i < co.size(); ++i)
                    if (s >> i & 1) sig.set(co[i]);
                BiasedGraph o = make_signed(g, sig);
                ++total;
                if (!is_tangled(o).tangled()) continue;
                ++tangled;
                std::string where = " on a " + std::to_string(n) + "-vertex graph with signature {" + [&] {
                    std::string x;
                    sig.for_each([&](int e) { x += (x.empty() ? "" : " ") + std::to_string(e); });
                    return x;
                }() + "}";
                ClassificationReport r;
                try {
                    r = classify(o, LabelMode::First);
                } catch (const ResourceLimit&) {
                    return {false, "resource limit" + where};
                }
                if (r.labels.empty()) return {false, "no label" + where};
                std::string bad = verify_report(o, r);
                if (!bad.empty()) return {false, bad + where};
            }
        }
    return {true, std::to_string(total) + " signed graphs, " + std::to_string(tangled) + " tangled, 0 misses"};
}

Outcome oracle_agreement() {
    std::mt19937 rng(707);
    int tangled = 0;
    auto draw = [&](int i) {
        int n = std::uniform_int_distribution<int>(2, 8)(rng);
        MultiGraph g = oracle::random_connected(rng, n, std::uniform_int_distribution<int>(0, n <= 6 ? 8 : 6)(rng));
        if (rng() % 10 == 0) g.add_edge(static_cast<VertexId>(rng() % n), static_cast<VertexId>(rng() % n));
        std::optional<BiasedGraph> o;
        double p = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
        switch (i % 4) {
            case 0: o = make_signed(g, oracle::random_subset(rng, g.edge_set(), p)); break;
            case 1: o = BiasedGraph(g, make_signed(g, oracle::random_subset(rng, g.edge_set(), p)).to_explicit()); break;
            case 2: o = random_completed(rng, g); break;
            default: o = BiasedGraph(g, AllUnbalanced{}); break;
        }
        return o ? *o : BiasedGraph(g, AllUnbalanced{});
    };
    for (int i = 0; i < kAgreement7; ++i) {
        // Odd samples are redrawn a few times to favour tangled instances;
        // either side's verdict may select, so neither is privileged.
        BiasedGraph o = draw(i);
        for (int k = 0; i % 2 && k < 50 && !is_tangled(o).tangled() && !oracle_is_tangled(o).tangled(); ++k) o = draw(i);
        TangleVerdict fast = is_tangled(o), slow = oracle_is_tangled(o);
        if (fast.kind != slow.kind)
            return {false, "sample " + std::to_string(i) + ": " + kind_name(fast.kind) + " vs " + kind_name(slow.kind)};
        tangled += fast.tangled();
    }
    return {true, std::to_string(kAgreement7) + " graphs, " + std::to_string(tangled) + " tangled"};
}

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& cmd) {
    Run r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_contract() {
    const std::string cli = TANGLE_CLI_PATH, golden = TANGLE_GOLDEN_DIR;
    int files = 0;
    for (FamilyKind k : kAllFamilies) {
        std::string name = family_name(k), path = golden + "/" + name + ".txt";
        std::string want = slurp(path);
        if (want.empty()) return {false, "missing golden " + path};
        Run gen = run(cli + " generate " + name);
        if (gen.status != 0 || gen.out != want) return {false, "generate " + name + " differs from its golden"};
        try {
            if (serialize(parse(want)) != want) return {false, "golden " + name + " does not round-trip"};
        } catch (const std::exception& e) {
            return {false, "golden " + name + ": " + e.what()};
        }
        if (run(cli + " validate " + path).status != 0) return {false, "validate " + name + " did not exit 0"};
        ++files;
    }
    const std::string k5 = golden + "/k5.txt";
    struct Case {
        std::string cmd;
        int want;
    };
    const std::vector<Case> cases = {
        {cli + " tangled " + k5, 0},
        {cli + " classify --labels first " + k5, 0},
        {cli + " decompose " + golden + "/tricoloured.txt", 0},
        {cli + " dot --classify " + k5, 0},
        {"printf 'biasedgraph 1\\nv 3\\ne 0 0 1\\ne 1 1 2\\ne 2 2 0\\nbias all-balanced\\n' | " + cli + " tangled -", 1},
        {"printf 'biasedgraph 1\\nv 4\\ne 0 0 1\\ne 1 1 2\\ne 2 2 3\\ne 3 3 0\\nbias all-balanced\\n' | " + cli +
             " linkage --terminals 0,2,1,3 -",
         1},
        {cli + " linkage --terminals 0,2,1,3 " + k5, 0},
        {"printf 'nonsense\\n' | " + cli + " validate -", 2},
        {cli + " validate /nonexistent/file", 2},
        {cli + " generate no-such-family", 2},
        {"TANGLE_CYCLE_CAP=abc " + cli + " tangled " + k5, 2},
        {"TANGLE_CYCLE_CAP=2 " + cli + " tangled " + k5, 3},
        {cli + " --cap 1 classify " + k5, 3},
    };
    for (const Case& c : cases) {
        int got = run(c.cmd).status;
        if (got != c.want)
            return {false, "'" + c.cmd + "' exited " + std::to_string(got) + ", expected " + std::to_string(c.want)};
    }
    return {true, std::to_string(files) + " goldens, " + std::to_string(cases.size()) + " exit-code cases"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "theta soundness", kLimit1, theta_soundness},
        {2, "linkage dichotomy", kLimit2, linkage_dichotomy},
        {3, "family tangledness", kLimit3, family_tangledness},
        {4, "sum laws", kLimit4, sum_laws},
        {5, "signature recovery", kLimit5, signature_recovery},
        {6, "classification completeness", kLimit6, completeness},
        {7, "oracle agreement", kLimit7, oracle_agreement},
        {8, "cli contract", kLimit8, cli_contract},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && secs > c.limit) o = {false, o.detail + "; over the time limit"};
        std::printf("%s criterion %d %s: %s (%.1f s, limit %.0f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.limit);
        std::fflush(stdout);
        failed += !o.ok;
    }
    return failed ? 1 : 0;
}
