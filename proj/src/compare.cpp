#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "mfid/error.hpp"
#include "mfid/format.hpp"
#include "mfid/harness.hpp"

namespace mfid::harness {
namespace {

struct PointResult {
    std::array<double, 2> value{};
    std::array<bool, 2> valid{};
    std::exception_ptr error;
};

std::vector<std::size_t> checked_order(const std::vector<std::size_t>& order, std::size_t n) {
    if (order.empty()) {
        std::vector<std::size_t> natural(n);
        std::iota(natural.begin(), natural.end(), std::size_t{0});
        return natural;
    }
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (sorted.size() != n || sorted[i] != i) {
            throw Error(ErrorCode::InvalidArgument, "evaluation order is not a permutation of the sweep");
        }
    }
    return order;
}

}  // namespace

ComparisonTable run_compare(const std::array<std::string, 2>& models, const json& base,
                            const SweepSpec& sweep, std::string_view quantity,
                            const CompareOptions& options) {
    const auto& registry = builtin_registry();
    const std::array<const ModelDescriptor*, 2> descriptors{&registry.get(models[0]),
                                                            &registry.get(models[1])};

    const auto accepts = [&](const std::string& id) {
        const auto names = sweepable_parameters(id);
        return std::find(names.begin(), names.end(), sweep.parameter) != names.end();
    };
    const std::string* owner = accepts(models[0]) ? &models[0] : accepts(models[1]) ? &models[1] : nullptr;
    if (owner == nullptr) {
        throw Error(ErrorCode::IncompatibleParameter,
                    "'" + sweep.parameter + "' is an input of neither " + models[0] + " nor " + models[1]);
    }

    const auto xs = sweep.values();
    const auto order = checked_order(options.order, xs.size());
    std::vector<PointResult> points(xs.size());

    const auto evaluate_point = [&](std::size_t i) {
        try {
            const json doc = apply_sweep_value(*owner, base, sweep.parameter, xs[i]);
            for (std::size_t m = 0; m < 2; ++m) {
                points[i].value[m] = evaluate(models[m], doc, quantity);
                points[i].valid[m] = is_valid(*descriptors[m], scenario_for(models[m], doc)).valid;
            }
        } catch (...) {
            points[i].error = std::current_exception();
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(xs.size())));
    if (threads == 1) {
        for (std::size_t i : order) evaluate_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < order.size(); k = next++) evaluate_point(order[k]);
            });
        }
    }

    // Report the failure of the smallest sweep value, whatever order ran.
    for (const auto& p : points) {
        if (p.error) std::rethrow_exception(p.error);
    }

    ComparisonTable table{sweep.parameter, xs, {}};
    for (std::size_t m = 0; m < 2; ++m) {
        ComparisonColumn col{models[m], {}, {}};
        for (const auto& p : points) {
            col.values.push_back(p.value[m]);
            col.valid.push_back(p.valid[m]);
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

std::string to_csv(const ComparisonTable& table) {
    std::string out = table.parameter;
    for (const auto& col : table.columns) out += "," + col.model + "," + col.model + "_valid";
    out += '\n';
    for (std::size_t i = 0; i < table.sweep.size(); ++i) {
        out += shortest(table.sweep[i]);
        for (const auto& col : table.columns) {
            out += ',' + shortest(col.values[i]) + ',' + (col.valid[i] ? "true" : "false");
        }
        out += '\n';
    }
    return out;
}

}  // namespace mfid::harness
