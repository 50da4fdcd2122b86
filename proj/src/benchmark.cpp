#include "cubt/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cubt/errors.hpp"
#include "cubt/eval.hpp"
#include "cubt/kmeans.hpp"
#include "cubt/pipeline.hpp"

namespace cubt {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace

std::string CubtSetting::hash() const {
    std::ostringstream canon;
    canon << "ms=" << minsize << ";md=" << format_double(mindev) << ";eps="
          << format_double(mindist) << ";dl=" << format_double(delta);
    const std::string s = canon.str();
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string BenchmarkConfig::to_json() const {
    json cs = json::array();
    for (const auto& c : cases) {
        json grid = json::array();
        for (const auto& g : c.grid)
            grid.push_back({{"minsize", g.minsize},
                            {"mindev", g.mindev},
                            {"mindist", g.mindist},
                            {"delta", g.delta}});
        cs.push_back({{"model", model_name(c.model)},
                      {"sigma", c.sigma},
                      {"per_group", c.per_group},
                      {"eta_quantile", c.eta_quantile},
                      {"grid", std::move(grid)}});
    }
    const json j{{"seed", seed},
                 {"replicates", replicates},
                 {"threads", threads},
                 {"run_known_k", run_known_k},
                 {"run_unknown_k", run_unknown_k},
                 {"run_kmeans", run_kmeans},
                 {"cases", std::move(cs)}};
    return j.dump(2) + "\n";
}

BenchmarkConfig BenchmarkConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad benchmark config: ") + e.what());
    }
    try {
        BenchmarkConfig c;
        c.seed = j.value("seed", std::uint64_t{1});
        c.replicates = j.value("replicates", 25);
        c.threads = j.value("threads", 0);
        c.run_known_k = j.value("run_known_k", true);
        c.run_unknown_k = j.value("run_unknown_k", true);
        c.run_kmeans = j.value("run_kmeans", true);
        for (const auto& cj : j.at("cases")) {
            BenchmarkCase bc;
            bc.model = model_from_name(cj.at("model").get<std::string>());
            bc.sigma = cj.value("sigma", 0.0);
            bc.per_group = cj.value("per_group", 0);
            bc.eta_quantile = cj.value("eta_quantile", 0.2);
            for (const auto& gj : cj.at("grid")) {
                CubtSetting s;
                s.minsize = gj.value("minsize", 1);
                s.mindev = gj.value("mindev", 0.8);
                s.mindist = gj.value("mindist", 0.0);
                s.delta = gj.value("delta", 0.2);
                bc.grid.push_back(s);
            }
            c.cases.push_back(std::move(bc));
        }
        if (c.replicates < 1) throw InvalidParam("replicates must be >= 1");
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("benchmark config misses a field: ") + e.what());
    }
}

namespace {

// All rows of one (case, replicate) cell, in the fixed method order.
std::vector<BenchmarkRow> run_cell(const BenchmarkConfig& config, const BenchmarkCase& c,
                                   std::uint64_t rep_seed) {
    std::vector<BenchmarkRow> rows;
    const std::string model = model_name(c.model);
    const int true_k = true_group_count(c.model);
    const auto base_row = [&](const std::string& method, const std::string& hash) {
        BenchmarkRow row;
        row.model = model;
        row.sigma = c.sigma;
        row.method = method;
        row.params_hash = hash;
        row.mce = std::numeric_limits<double>::quiet_NaN();
        row.seed = rep_seed;
        row.status = "ok";
        return row;
    };

    Dataset data;
    std::string gen_error;
    try {
        data = generate({c.model, c.sigma, c.per_group, rep_seed});
    } catch (const Error& e) {
        gen_error = sanitize(std::string("error:") + e.what());
    }

    for (const auto& setting : c.grid) {
        Params p;
        p.minsize = setting.minsize;
        p.mindev = setting.mindev;
        p.mindist = setting.mindist;
        p.delta = setting.delta;
        if (config.run_known_k) {
            BenchmarkRow row = base_row("cubt_known", setting.hash());
            if (!gen_error.empty()) {
                row.status = gen_error;
            } else {
                try {
                    Params pk = p;
                    pk.k = true_k;
                    const ClusterResult r = fit(data, pk);
                    row.mce = mce(data.labels, r.assignments);
                    row.k_found = r.k_found;
                } catch (const Error& e) {
                    row.status = sanitize(std::string("error:") + e.what());
                }
            }
            rows.push_back(std::move(row));
        }
        if (config.run_unknown_k) {
            BenchmarkRow row = base_row("cubt_eta", setting.hash());
            if (!gen_error.empty()) {
                row.status = gen_error;
            } else {
                try {
                    Params pq = p;
                    pq.eta_quantile = c.eta_quantile;
                    const ClusterResult r = fit(data, pq);
                    row.mce = mce(data.labels, r.assignments);
                    row.k_found = r.k_found;
                } catch (const Error& e) {
                    row.status = sanitize(std::string("error:") + e.what());
                }
            }
            rows.push_back(std::move(row));
        }
    }

    if (config.run_kmeans) {
        const std::uint64_t km_seed = splitmix64(rep_seed);
        for (int restarts : {1, 10}) {
            BenchmarkRow row = base_row(restarts == 1 ? "kmeans" : "kmeans10", "-");
            if (!gen_error.empty()) {
                row.status = gen_error;
            } else {
                try {
                    const KMeansModel m = kmeans_multi(data, true_k, restarts, km_seed);
                    row.mce = mce(data.labels, m.assignments);
                    row.k_found = m.k;
                } catch (const Error& e) {
                    row.status = sanitize(std::string("error:") + e.what());
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    if (config.replicates < 1) throw InvalidParam("replicates must be >= 1");
    const std::size_t n_cases = config.cases.size();
    const std::size_t n_tasks = n_cases * static_cast<std::size_t>(config.replicates);
    std::vector<std::vector<BenchmarkRow>> slots(n_tasks);

    // Worker pool over (case, replicate) cells. Results land in their own
    // slot, so the report is identical no matter how many threads run or
    // in which order cells finish.
    std::atomic<std::size_t> cursor{0};
    const auto work = [&]() {
        while (true) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= n_tasks) break;
            const std::size_t ci = t / static_cast<std::size_t>(config.replicates);
            const std::size_t r = t % static_cast<std::size_t>(config.replicates);
            const std::uint64_t rep_seed =
                splitmix64(splitmix64(config.seed ^ (0x9E3779B97F4A7C15ULL * (ci + 1))) + r);
            slots[t] = run_cell(config, config.cases[ci], rep_seed);
        }
    };
    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_tasks));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    BenchmarkReport report;
    for (auto& slot : slots)
        report.rows.insert(report.rows.end(), slot.begin(), slot.end());

    // Aggregate in the same (case, setting, method) order the rows use.
    std::map<std::tuple<std::string, double, std::string, std::string>, std::size_t> where;
    for (std::size_t ci = 0; ci < n_cases; ++ci) {
        const BenchmarkCase& c = config.cases[ci];
        const std::string model = model_name(c.model);
        const auto add = [&](const std::string& method, const std::string& hash) {
            BenchmarkAggregate a;
            a.model = model;
            a.sigma = c.sigma;
            a.method = method;
            a.params_hash = hash;
            where[{model, c.sigma, method, hash}] = report.aggregates.size();
            report.aggregates.push_back(std::move(a));
        };
        for (const auto& setting : c.grid) {
            if (config.run_known_k) add("cubt_known", setting.hash());
            if (config.run_unknown_k) add("cubt_eta", setting.hash());
        }
        if (config.run_kmeans) {
            add("kmeans", "-");
            add("kmeans10", "-");
        }
    }
    std::map<std::string, int> true_k_of;
    for (const auto& c : config.cases) true_k_of[model_name(c.model)] = true_group_count(c.model);
    for (const auto& row : report.rows) {
        auto it = where.find({row.model, row.sigma, row.method, row.params_hash});
        if (it == where.end()) continue;
        BenchmarkAggregate& a = report.aggregates[it->second];
        ++a.replicates;
        if (row.status == "ok") {
            a.mean_mce += row.mce;
            if (row.k_found == true_k_of[row.model]) ++a.correct_k;
        } else {
            ++a.failures;
        }
    }
    for (auto& a : report.aggregates) {
        const int ok = a.replicates - a.failures;
        a.mean_mce = ok > 0 ? a.mean_mce / ok : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

std::string BenchmarkReport::rows_csv() const {
    std::ostringstream out;
    out << "model,sigma,method,params_hash,mce,k_found,seed,status\n";
    for (const auto& r : rows)
        out << r.model << ',' << format_double(r.sigma) << ',' << r.method << ','
            << r.params_hash << ',' << format_double(r.mce) << ',' << r.k_found << ',' << r.seed
            << ',' << r.status << '\n';
    return out.str();
}

std::string BenchmarkReport::aggregates_csv() const {
    std::ostringstream out;
    out << "model,sigma,method,params_hash,mean_mce,correct_k,replicates,failures\n";
    for (const auto& a : aggregates)
        out << a.model << ',' << format_double(a.sigma) << ',' << a.method << ',' << a.params_hash
            << ',' << format_double(a.mean_mce) << ',' << a.correct_k << ',' << a.replicates
            << ',' << a.failures << '\n';
    return out.str();
}

double BenchmarkReport::best_mean_mce(const std::string& model, double sigma,
                                      const std::string& method) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& a : aggregates) {
        if (a.model != model || a.sigma != sigma || a.method != method) continue;
        if (a.failures > 0 || a.replicates == 0) continue;
        if (std::isnan(best) || a.mean_mce < best) best = a.mean_mce;
    }
    return best;
}

int BenchmarkReport::best_correct_k(const std::string& model, double sigma,
                                    const std::string& method) const {
    int best = -1;
    for (const auto& a : aggregates) {
        if (a.model != model || a.sigma != sigma || a.method != method) continue;
        best = std::max(best, a.correct_k);
    }
    return best;
}

std::string BenchmarkReport::summary_table() const {
    std::ostringstream out;
    std::vector<std::pair<std::string, double>> seen;
    for (const auto& a : aggregates) {
        const std::pair<std::string, double> key{a.model, a.sigma};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
    }
    for (const auto& [model, sigma] : seen) {
        out << model << " sigma=" << format_double(sigma) << ":";
        const auto emit = [&](const std::string& method, const char* tag) {
            double best = std::numeric_limits<double>::infinity();
            double worst = -std::numeric_limits<double>::infinity();
            int best_k = -1;
            bool any = false;
            for (const auto& a : aggregates) {
                if (a.model != model || a.sigma != sigma || a.method != method) continue;
                if (a.failures > 0 || a.replicates == a.failures) continue;
                any = true;
                best = std::min(best, a.mean_mce);
                worst = std::max(worst, a.mean_mce);
                best_k = std::max(best_k, a.correct_k);
            }
            if (!any) return;
            char buf[128];
            if (method == "cubt_eta")
                std::snprintf(buf, sizeof buf, "  %s mce %.4f..%.4f correct-k %d", tag, best,
                              worst, best_k);
            else if (method == "cubt_known")
                std::snprintf(buf, sizeof buf, "  %s mce %.4f..%.4f", tag, best, worst);
            else
                std::snprintf(buf, sizeof buf, "  %s mce %.4f", tag, best);
            out << buf;
        };
        emit("cubt_known", "cubt(k)");
        emit("cubt_eta", "cubt(eta)");
        emit("kmeans", "kmeans");
        emit("kmeans10", "kmeans10");
        out << '\n';
    }
    return out.str();
}

BenchmarkConfig desk_scale_config() {
    // Small replication of the synthetic study: 25 replicates per model and a
    // tuned grid per case. All trees are grown deep (tiny mindev) because the
    // quantile-threshold runs need several leaves per group; minsize carries
    // the granularity. The ring case additionally prunes hard, just below the
    // inter-ring gap (~120 at these radii), with a small trimming fraction:
    // that collapses each ring into a handful of touching chunks whose mutual
    // dissimilarities sit far below the gap, which is what makes the
    // quantile threshold land between the rings.
    BenchmarkConfig config;
    config.seed = 20260815;
    config.replicates = 25;

    auto deep = [](int minsize) { return CubtSetting{minsize, 0.001, 0.0, 0.2}; };

    config.cases.push_back({Model::M1, 0.11, 0, 0.2, {deep(10), deep(20), deep(30)}});
    config.cases.push_back({Model::M1, 0.19, 0, 0.2, {deep(10), deep(20), deep(30)}});
    config.cases.push_back({Model::M2, 0.9, 0, 0.08, {deep(5), deep(10), deep(15)}});
    config.cases.push_back({Model::M3, 0.0, 0, 0.25,
                            {CubtSetting{10, 0.001, 118.0, 0.05},
                             CubtSetting{12, 0.001, 115.0, 0.05}, deep(10)}});
    config.cases.push_back({Model::M4, 0.03, 0, 0.15, {deep(25), deep(5), deep(10)}});
    config.cases.push_back(
        {Model::CartComparison, 0.0, 0, 0.2, {deep(15), deep(20), deep(25), deep(30)}});
    return config;
}

}  // namespace cubt
