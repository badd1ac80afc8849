#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "qorder/errors.hpp"
#include "qorder/experiments/table.hpp"

namespace qorder::experiments
{

//! Dimensionless products delta_t * E_bar at each experiment's failure point.
struct BoundReport
{
    double order_product = 0;  //!< at p_fail = 0.1
    std::map<std::string, double> order_sensitivity;  //!< threshold -> product
    double coincidence_ka_star = 0;
    double coincidence_product = 0;  //!< ka_star / 2
    bool order_within = false;        //!< in [0.1, 10]
    bool coincidence_within = false;  //!< in [0.1, 10]

    bool all_within() const { return order_within && coincidence_within; }
};

inline constexpr double bound_low = 0.1;
inline constexpr double bound_high = 10;

/*!
 * Aggregate the order-of-arrival threshold fit and the coincidence
 * crossover. Throws report_incomplete if either table (or the summary
 * values it must carry) is missing.
 */
inline BoundReport bound_report(Table const* order, Table const* coincidence)
{
    if (!order || !coincidence)
    {
        throw report_incomplete(std::string("bound_report: missing ")
                                + (!order ? "order-of-arrival" : "coincidence") + " sweep");
    }
    auto require = [](Table const& t, std::string const& key) {
        auto it = t.summary.find(key);
        if (it == t.summary.end())
        {
            throw report_incomplete("bound_report: table '" + t.experiment
                                    + "' lacks summary '" + key + "'");
        }
        return it->second;
    };
    BoundReport r;
    r.order_product = require(*order, "threshold_0.1_delta_t_E_bar");
    for (auto const& [key, value] : order->summary)
    {
        std::string const prefix = "threshold_";
        std::string const suffix = "_delta_t_E_bar";
        if (key.rfind(prefix, 0) == 0 && key.size() > prefix.size() + suffix.size()
            && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
        {
            auto const thr = key.substr(prefix.size(), key.size() - prefix.size() - suffix.size());
            r.order_sensitivity[thr] = value;
        }
    }
    r.coincidence_ka_star = require(*coincidence, "ka_star");
    r.coincidence_product = require(*coincidence, "ka_star_delta_t_E_bar");
    r.order_within = r.order_product >= bound_low && r.order_product <= bound_high;
    r.coincidence_within
        = r.coincidence_product >= bound_low && r.coincidence_product <= bound_high;
    return r;
}

inline nlohmann::ordered_json to_json(BoundReport const& r)
{
    nlohmann::ordered_json j;
    j["schema"] = "qorder.report.v1";
    j["order_of_arrival"] = {{"delta_t_E_bar_at_p_fail_0.1", r.order_product},
                             {"threshold_sensitivity", r.order_sensitivity},
                             {"within_bounds", r.order_within}};
    j["coincidence"] = {{"ka_star", r.coincidence_ka_star},
                        {"delta_t_c_E_bar", r.coincidence_product},
                        {"within_bounds", r.coincidence_within}};
    j["bounds"] = {bound_low, bound_high};
    j["all_within"] = r.all_within();
    return j;
}

}  // namespace qorder::experiments
