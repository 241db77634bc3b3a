#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpiassist/corpus.hpp"
#include "mpiassist/mpi_inventory.hpp"
#include "mpiassist/mpiedit.hpp"
#include "mpiassist/predictor.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

// ---------------------------------------------------------------- alignment

struct MatchOutcome {
    std::vector<std::pair<MpiCall, MpiCall>> tp;  // (predicted, gold)
    std::vector<MpiCall> fp;
    std::vector<MpiCall> fn;
};

/// Maximum matching of equal-name calls within `tolerance` lines. For each
/// name, a two-pointer sweep over ascending lines is optimal because every
/// predicted call matches a contiguous window of gold lines.
inline MatchOutcome align(const std::vector<MpiCall>& pred, const std::vector<MpiCall>& gold, int tolerance = 1) {
    std::map<std::string, std::pair<std::vector<const MpiCall*>, std::vector<const MpiCall*>>> by_name;
    for (const auto& c : pred) by_name[c.name].first.push_back(&c);
    for (const auto& c : gold) by_name[c.name].second.push_back(&c);
    auto by_line = [](const MpiCall* a, const MpiCall* b) { return a->line < b->line; };
    MatchOutcome out;
    for (auto& [name, lists] : by_name) {
        auto& [p, g] = lists;
        std::stable_sort(p.begin(), p.end(), by_line);
        std::stable_sort(g.begin(), g.end(), by_line);
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < p.size() && j < g.size()) {
            const int d = p[i]->line - g[j]->line;
            if (std::abs(d) <= tolerance) {
                out.tp.emplace_back(*p[i++], *g[j++]);
            } else if (d < 0) {
                out.fp.push_back(*p[i++]);
            } else {
                out.fn.push_back(*g[j++]);
            }
        }
        for (; i < p.size(); ++i) out.fp.push_back(*p[i]);
        for (; j < g.size(); ++j) out.fn.push_back(*g[j]);
    }
    return out;
}

// ------------------------------------------------------ precision and recall

enum class NameFilter { all, core };

struct Counts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    Counts& operator+=(const Counts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

inline Counts count(const MatchOutcome& m, NameFilter filter = NameFilter::all) {
    const auto& inv = MpiInventory::builtin();
    auto keep = [&](const MpiCall& c) { return filter == NameFilter::all || inv.is_core(c.name); };
    Counts c;
    for (const auto& [p, g] : m.tp) c.tp += keep(g) ? 1 : 0;
    for (const auto& p : m.fp) c.fp += keep(p) ? 1 : 0;
    for (const auto& g : m.fn) c.fn += keep(g) ? 1 : 0;
    return c;
}

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool vacuous = false;              // no predicted and no gold calls at all
    bool precision_undefined = false;  // no predicted calls
    bool recall_undefined = false;     // no gold calls
};

/// Micro-averaged scores. With nothing predicted and nothing expected the
/// result is 1.0 and flagged; an undefined precision or recall alone is 0.
inline Prf prf(const Counts& c) {
    Prf r;
    if (c.tp + c.fp + c.fn == 0) {
        r.precision = r.recall = r.f1 = 1.0;
        r.vacuous = true;
        return r;
    }
    r.precision_undefined = c.tp + c.fp == 0;
    r.recall_undefined = c.tp + c.fn == 0;
    r.precision = r.precision_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    r.recall = r.recall_undefined ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

inline Prf prf(const std::vector<MatchOutcome>& outcomes, NameFilter filter = NameFilter::all) {
    Counts total;
    for (const auto& m : outcomes) total += count(m, filter);
    return prf(total);
}

// ------------------------------------------------------------ text metrics

using Tokens = std::vector<std::string>;

struct BleuStats {
    std::array<std::size_t, 4> matches{};
    std::array<std::size_t, 4> totals{};
    std::size_t pred_len = 0;
    std::size_t ref_len = 0;

    BleuStats& operator+=(const BleuStats& o) {
        for (int n = 0; n < 4; ++n) {
            matches[n] += o.matches[n];
            totals[n] += o.totals[n];
        }
        pred_len += o.pred_len;
        ref_len += o.ref_len;
        return *this;
    }
};

inline BleuStats bleu_stats(const Tokens& pred, const Tokens& ref) {
    BleuStats s;
    s.pred_len = pred.size();
    s.ref_len = ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
        std::map<std::vector<std::string>, std::size_t> ref_counts;
        for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[Tokens(ref.begin() + i, ref.begin() + i + n)];
        std::map<std::vector<std::string>, std::size_t> pred_counts;
        for (std::size_t i = 0; i + n <= pred.size(); ++i) ++pred_counts[Tokens(pred.begin() + i, pred.begin() + i + n)];
        for (const auto& [gram, k] : pred_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) s.matches[n - 1] += std::min(k, it->second);
            s.totals[n - 1] += k;
        }
    }
    return s;
}

/// BLEU-4 with uniform weights and brevity penalty. An order with no
/// matching n-grams uses (0 + 1) / (total + 1) instead of zero.
inline double bleu_score(const BleuStats& s) {
    if (s.pred_len == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 0; n < 4; ++n) {
        const double p = s.matches[n] > 0 ? static_cast<double>(s.matches[n]) / static_cast<double>(s.totals[n])
                                          : 1.0 / static_cast<double>(s.totals[n] + 1);
        log_sum += std::log(p) / 4.0;
    }
    const double bp = s.pred_len < s.ref_len
                          ? std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.pred_len))
                          : 1.0;
    return bp * std::exp(log_sum);
}

inline double bleu(const Tokens& pred, const Tokens& ref) { return bleu_score(bleu_stats(pred, ref)); }

inline double corpus_bleu(const std::vector<Tokens>& preds, const std::vector<Tokens>& refs) {
    BleuStats total;
    for (std::size_t i = 0; i < preds.size() && i < refs.size(); ++i) total += bleu_stats(preds[i], refs[i]);
    return bleu_score(total);
}

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline double rouge_l(const Tokens& pred, const Tokens& ref, double beta = 1.2) {
    if (pred.empty() && ref.empty()) return 1.0;
    const std::size_t lcs = lcs_length(pred, ref);
    if (lcs == 0) return 0.0;
    const double p = static_cast<double>(lcs) / static_cast<double>(pred.size());
    const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
    const double b2 = beta * beta;
    return (1 + b2) * p * r / (r + b2 * p);
}

/// Unigram METEOR without stemming or synonyms: Fmean with recall weight 9
/// and fragmentation penalty 0.5 * (chunks / matches)^3.
inline double meteor_simple(const Tokens& pred, const Tokens& ref) {
    if (pred.empty() && ref.empty()) return 1.0;
    std::vector<bool> used(ref.size(), false);
    std::vector<long> align(pred.size(), -1);
    long last = -2;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        long pick = -1;
        if (last >= -1 && static_cast<std::size_t>(last + 1) < ref.size() && !used[last + 1] &&
            ref[last + 1] == pred[i]) {
            pick = last + 1;
        } else {
            for (std::size_t j = 0; j < ref.size(); ++j) {
                if (!used[j] && ref[j] == pred[i]) {
                    pick = static_cast<long>(j);
                    break;
                }
            }
        }
        if (pick >= 0) {
            used[pick] = true;
            align[i] = pick;
            last = pick;
        } else {
            last = -2;
        }
    }
    std::size_t matches = 0;
    std::size_t chunks = 0;
    long prev = -2;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (align[i] < 0) {
            prev = -2;
            continue;
        }
        ++matches;
        if (align[i] != prev + 1) ++chunks;
        prev = align[i];
    }
    if (matches == 0) return 0.0;
    const double p = static_cast<double>(matches) / static_cast<double>(pred.size());
    const double r = static_cast<double>(matches) / static_cast<double>(ref.size());
    const double fmean = 10 * p * r / (r + 9 * p);
    const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / static_cast<double>(matches), 3);
    return fmean * (1 - penalty);
}

inline Tokens code_tokens(std::string_view text) { return token_texts(tokenize_lenient(text)); }

inline bool exact_match(std::string_view pred, std::string_view label) { return code_tokens(pred) == code_tokens(label); }

// --------------------------------------------------------------- evaluation

struct MetricsReport {
    double m_precision = 0, m_recall = 0, m_f1 = 0;
    double mcc_precision = 0, mcc_recall = 0, mcc_f1 = 0;
    double bleu = 0, rouge_l = 0, meteor_simple = 0, exact_match_acc = 0;
    std::size_t n_examples = 0;
    Prf m;    // flags for the M- scores
    Prf mcc;  // flags for the MCC- scores
};

struct ExampleDetail {
    std::string id;
    Counts all;
    Counts core;
    double bleu = 0, rouge_l = 0, meteor_simple = 0;
    bool exact_match = false;
};

struct Evaluation {
    MetricsReport report;
    std::vector<ExampleDetail> details;
};

/// Re-standardizes parseable code; anything else is scored as written.
inline std::string standardize_or_raw(std::string_view code) {
    try {
        return standardize(code);
    } catch (const Error&) {
        return std::string(code);
    }
}

struct EvalItem {
    std::string id;
    std::string label_code;
    std::vector<MpiCall> gold;
    std::string predicted_code;
};

inline Evaluation evaluate_items(const std::vector<EvalItem>& items, int tolerance = 1, unsigned threads = 0) {
    struct Scored {
        ExampleDetail detail;
        BleuStats bleu;
    };
    auto scored = parallel_map(
        items,
        [&](const EvalItem& item) {
            Scored s;
            s.detail.id = item.id;
            const std::string pred = standardize_or_raw(item.predicted_code);
            const MatchOutcome m = align(extract_calls_lexical(pred), item.gold, tolerance);
            s.detail.all = count(m, NameFilter::all);
            s.detail.core = count(m, NameFilter::core);
            const Tokens p = code_tokens(pred);
            const Tokens r = code_tokens(item.label_code);
            s.bleu = bleu_stats(p, r);
            s.detail.bleu = bleu_score(s.bleu);
            s.detail.rouge_l = rouge_l(p, r);
            s.detail.meteor_simple = meteor_simple(p, r);
            s.detail.exact_match = p == r;
            return s;
        },
        threads);
    Evaluation ev;
    Counts all;
    Counts core;
    BleuStats bs;
    double rouge_sum = 0, meteor_sum = 0;
    std::size_t exact = 0;
    for (auto& s : scored) {
        all += s.detail.all;
        core += s.detail.core;
        bs += s.bleu;
        rouge_sum += s.detail.rouge_l;
        meteor_sum += s.detail.meteor_simple;
        exact += s.detail.exact_match ? 1 : 0;
        ev.details.push_back(std::move(s.detail));
    }
    MetricsReport& r = ev.report;
    r.n_examples = items.size();
    r.m = prf(all);
    r.mcc = prf(core);
    r.m_precision = r.m.precision;
    r.m_recall = r.m.recall;
    r.m_f1 = r.m.f1;
    r.mcc_precision = r.mcc.precision;
    r.mcc_recall = r.mcc.recall;
    r.mcc_f1 = r.mcc.f1;
    if (!items.empty()) {
        const double n = static_cast<double>(items.size());
        r.bleu = bleu_score(bs);
        r.rouge_l = rouge_sum / n;
        r.meteor_simple = meteor_sum / n;
        r.exact_match_acc = static_cast<double>(exact) / n;
    }
    return ev;
}

inline std::vector<MpiCall> to_calls(const std::vector<GoldCall>& gold) {
    std::vector<MpiCall> out;
    for (const auto& g : gold) out.push_back({g.name, g.line, 0, CallContext::statement});
    return out;
}

/// Scores predictions against the examples of `split` ("all" for every
/// example). Every selected example needs a prediction.
inline Evaluation evaluate(const std::vector<DatasetExample>& dataset, const std::vector<PredictionRecord>& predictions,
                           int tolerance = 1, const std::string& split = "test", unsigned threads = 0) {
    std::unordered_map<std::string, const PredictionRecord*> by_id;
    for (const auto& p : predictions) by_id.emplace(p.id, &p);
    std::vector<EvalItem> items;
    for (const auto& ex : dataset) {
        if (split != "all" && ex.split != split) continue;
        auto it = by_id.find(ex.id);
        if (it == by_id.end()) throw MissingPredictionError(ex.id);
        items.push_back({ex.id, ex.label_code, to_calls(ex.gold_calls), it->second->predicted_code});
    }
    return evaluate_items(items, tolerance, threads);
}

// ------------------------------------------------------------------ output

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    auto flag = [&](const Prf& p, const std::string& prefix) {
        if (p.vacuous) flags.push_back(prefix + "vacuous");
        if (p.precision_undefined && !p.vacuous) flags.push_back(prefix + "precision_undefined");
        if (p.recall_undefined && !p.vacuous) flags.push_back(prefix + "recall_undefined");
    };
    flag(r.m, "m_");
    flag(r.mcc, "mcc_");
    flags.push_back("meteor_simple_not_comparable");
    return {{"n_examples", r.n_examples},
            {"m_f1", r.m_f1},
            {"m_precision", r.m_precision},
            {"m_recall", r.m_recall},
            {"mcc_f1", r.mcc_f1},
            {"mcc_precision", r.mcc_precision},
            {"mcc_recall", r.mcc_recall},
            {"bleu", r.bleu},
            {"meteor_simple", r.meteor_simple},
            {"rouge_l", r.rouge_l},
            {"exact_match_acc", r.exact_match_acc},
            {"flags", std::move(flags)}};
}

inline nlohmann::ordered_json to_json(const ExampleDetail& d) {
    return {{"id", d.id},
            {"tp", d.all.tp},
            {"fp", d.all.fp},
            {"fn", d.all.fn},
            {"mcc_tp", d.core.tp},
            {"mcc_fp", d.core.fp},
            {"mcc_fn", d.core.fn},
            {"bleu", d.bleu},
            {"rouge_l", d.rouge_l},
            {"meteor_simple", d.meteor_simple},
            {"exact_match", d.exact_match}};
}

inline std::string details_to_jsonl(const std::vector<ExampleDetail>& details) {
    std::string out;
    for (const auto& d : details) {
        out += to_json(d).dump();
        out += '\n';
    }
    return out;
}

/// Aligned two-column table in the usual row order.
inline std::string metrics_table(const MetricsReport& r) {
    const std::pair<const char*, double> rows[] = {
        {"M-F1", r.m_f1},           {"M-Precision", r.m_precision},     {"M-Recall", r.m_recall},
        {"MCC-F1", r.mcc_f1},       {"MCC-Precision", r.mcc_precision}, {"MCC-Recall", r.mcc_recall},
        {"BLEU", r.bleu},           {"Meteor (simple)", r.meteor_simple}, {"Rouge-l", r.rouge_l},
        {"ACC", r.exact_match_acc}};
    std::string out;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-16s %s\n", "Quality Measure", "Score");
    out += buf;
    for (const auto& [name, v] : rows) {
        std::snprintf(buf, sizeof buf, "%-16s %.4f\n", name, v);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-16s %zu\n", "Examples", r.n_examples);
    out += buf;
    return out;
}

} // namespace mpiassist
