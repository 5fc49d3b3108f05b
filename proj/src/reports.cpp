#include "proofsynth/reports.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "proofsynth/errors.hpp"

namespace proofsynth {

namespace {

using nlohmann::json;

std::string pct(int correct, int total) {
    if (total == 0) return "N/A";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * correct / total);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

void write_report(const Report& r, const std::string& base) {
    {
        std::ofstream out(base + ".txt", std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + base + ".txt");
        out << r.text;
    }
    std::ofstream out(base + ".jsonl", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + base + ".jsonl");
    for (const auto& line : r.jsonl) out << line << "\n";
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width(header.size());
    for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (size_t c = 0; c < row.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], row[c].size());

    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (size_t c = 0; c < width.size(); ++c) {
            std::string cell = c < row.size() ? row[c] : "";
            if (c > 0) out += "  ";
            if (c == 0) {
                out += cell;
                out.append(width[c] - cell.size(), ' ');
            } else {
                out.append(width[c] - cell.size(), ' ');
                out += cell;
            }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    };
    emit(header);
    size_t total = 0;
    for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
    out.append(total, '-');
    out += "\n";
    for (const auto& row : rows) emit(row);
    return out;
}

Report report_gen(const std::vector<ProofPair>& corpus) {
    std::map<int, int> by_size;
    for (const auto& pr : corpus) by_size[term_size(pr.proof)]++;

    Report r;
    std::vector<std::vector<std::string>> rows;
    for (const auto& [size, count] : by_size) {
        rows.push_back({std::to_string(size), std::to_string(count)});
        r.jsonl.push_back(json{{"size", size}, {"count", count}}.dump());
    }
    rows.push_back({"total", std::to_string(corpus.size())});
    r.jsonl.push_back(json{{"total", corpus.size()}}.dump());
    r.text = render_table({"proof size", "count"}, rows);
    return r;
}

Report report_train(const std::vector<EpochStats>& stats) {
    Report r;
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : stats) {
        rows.push_back({std::to_string(s.epoch), fixed(s.mean_loss, 6), fixed(s.val_accuracy, 6)});
        r.jsonl.push_back(json{{"epoch", s.epoch},
                               {"mean_loss", s.mean_loss},
                               {"val_accuracy", s.val_accuracy}}
                              .dump());
    }
    r.text = render_table({"epoch", "mean loss", "val accuracy"}, rows);
    return r;
}

Report report_eval(const RuleEstimator& est, const std::vector<Quadruple>& quads) {
    // bucket 0..14 = depths 1..15, 15 = 16-20, 16 = 21+
    constexpr int kBuckets = 17;
    auto bucket_of = [](int depth) {
        if (depth <= 15) return depth - 1;
        if (depth <= 20) return 15;
        return 16;
    };
    auto bucket_label = [](int b) -> std::string {
        if (b <= 14) return std::to_string(b + 1);
        return b == 15 ? "16-20" : "21+";
    };

    int count[kBuckets + 1][kRuleCount + 1] = {};    // +1 row: all depths
    int correct[kBuckets + 1][kRuleCount + 1] = {};  // +1 col: all rules
    for (const auto& q : quads) {
        int b = bucket_of(static_cast<int>(q.path.size()) + 1);
        int rr = static_cast<int>(q.rule);
        bool ok = est.classify(q.goal, q.path, q.obligation).argmax() == q.rule;
        for (int row : {b, kBuckets}) {
            count[row][rr]++;
            count[row][kRuleCount]++;
            if (ok) {
                correct[row][rr]++;
                correct[row][kRuleCount]++;
            }
        }
    }

    std::vector<std::string> header{"Depth", "#", "All"};
    for (int j = 0; j < kRuleCount; ++j) header.push_back(rule_name(static_cast<Rule>(j)));

    Report r;
    std::vector<std::vector<std::string>> rows;
    for (int b = 0; b <= kBuckets; ++b) {
        if (count[b][kRuleCount] == 0) continue;  // unpopulated depth
        std::string label = b == kBuckets ? "all" : bucket_label(b);
        std::vector<std::string> row{label, std::to_string(count[b][kRuleCount]),
                                     pct(correct[b][kRuleCount], count[b][kRuleCount])};
        json jrules;
        for (int j = 0; j < kRuleCount; ++j) {
            row.push_back(pct(correct[b][j], count[b][j]));
            const char* name = rule_name(static_cast<Rule>(j));
            if (count[b][j] == 0)
                jrules[name] = nullptr;
            else
                jrules[name] = static_cast<double>(correct[b][j]) / count[b][j];
        }
        rows.push_back(row);
        r.jsonl.push_back(json{{"depth", label},
                               {"count", count[b][kRuleCount]},
                               {"accuracy", count[b][kRuleCount] == 0
                                                ? 0.0
                                                : static_cast<double>(correct[b][kRuleCount]) /
                                                      count[b][kRuleCount]},
                               {"rules", jrules}}
                              .dump());
    }
    r.text = render_table(header, rows);
    return r;
}

Report report_bench(const std::vector<BenchResult>& results) {
    Report r;
    std::vector<std::vector<std::string>> rows;
    int proved = 0;
    double time_on_success = 0.0;
    for (size_t i = 0; i < results.size(); ++i) {
        const BenchResult& b = results[i];
        if (b.found) {
            ++proved;
            time_on_success += b.seconds;
        }
        rows.push_back({std::to_string(i + 1), b.prop,
                        b.found ? (b.verified ? "proved" : "UNVERIFIED") : "NOT_FOUND",
                        b.found ? std::to_string(b.proof_size) : "-",
                        std::to_string(b.expansions), fixed(b.seconds, 3)});
        r.jsonl.push_back(json{{"prop", b.prop},
                               {"found", b.found},
                               {"verified", b.verified},
                               {"proof_size", b.proof_size},
                               {"expansions", b.expansions},
                               {"seconds", b.seconds}}
                              .dump());
    }
    double mean = proved ? time_on_success / proved : 0.0;
    r.text = render_table({"#", "proposition", "result", "size", "expansions", "seconds"}, rows);
    char line[128];
    std::snprintf(line, sizeof line, "proved %d/%zu  mean seconds on success %.3f\n", proved,
                  results.size(), mean);
    r.text += line;
    r.jsonl.push_back(json{{"summary", true},
                           {"proved", proved},
                           {"total", results.size()},
                           {"mean_seconds_on_success", mean}}
                          .dump());
    return r;
}

}  // namespace proofsynth
