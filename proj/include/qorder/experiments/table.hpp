#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qorder::experiments
{

inline constexpr char const* table_schema = "qorder.table.v1";

/*!
 * Solver health attached to every sweep row. A row whose diagnostics miss
 * the dynamics tolerances carries one or more reasons in `flags`.
 */
struct Diagnostics
{
    double norm_drift = 0;
    double boundary_probability = 0;
    double dk_over_k = 0;
    double points_per_wavelength = 0;
    std::vector<std::string> flags;

    bool flagged() const { return !flags.empty(); }
    void flag(std::string reason) { flags.push_back(std::move(reason)); }
};

struct SweepRow
{
    double value = 0;            //!< swept parameter
    std::vector<double> values;  //!< aligned with Table::columns
    Diagnostics diag;
};

struct Table
{
    std::string experiment;
    std::string parameter;
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    //! Scalars derived from the whole sweep (crossover, fit parameters, ...).
    std::map<std::string, double> summary;

    std::size_t column_index(std::string const& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
        {
            if (columns[i] == name)
            {
                return i;
            }
        }
        throw std::out_of_range("table '" + experiment + "' has no column '" + name + "'");
    }

    std::vector<double> column(std::string const& name) const
    {
        auto const idx = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (auto const& r : rows)
        {
            out.push_back(r.values.at(idx));
        }
        return out;
    }

    //! True if any row carries an "error:" flag (a point whose run failed).
    bool has_errors() const
    {
        for (auto const& r : rows)
        {
            for (auto const& f : r.diag.flags)
            {
                if (f.rfind("error:", 0) == 0)
                {
                    return true;
                }
            }
        }
        return false;
    }

    double summary_value(std::string const& key) const
    {
        auto it = summary.find(key);
        if (it == summary.end())
        {
            throw std::out_of_range("table '" + experiment + "' has no summary '" + key + "'");
        }
        return it->second;
    }
};

//! Round-trippable decimal form ("nan", "inf" and "-inf" spelled out).
inline std::string format_number(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail
{
inline std::string join_flags(std::vector<std::string> const& flags)
{
    std::string out;
    for (auto const& f : flags)
    {
        if (!out.empty())
        {
            out += ';';
        }
        out += f;
    }
    return out;
}
}  // namespace detail

/*!
 * Comma-separated table. Comment lines starting with '#' carry the schema,
 * experiment id and summary scalars; then one header row and the data.
 */
inline void write_csv(std::ostream& os, Table const& t)
{
    os << "# schema=" << table_schema << '\n';
    os << "# experiment=" << t.experiment << '\n';
    for (auto const& [key, value] : t.summary)
    {
        os << "# summary." << key << '=' << format_number(value) << '\n';
    }
    os << t.parameter;
    for (auto const& c : t.columns)
    {
        os << ',' << c;
    }
    os << ",norm_drift,boundary_probability,dk_over_k,points_per_wavelength,flags\n";
    for (auto const& r : t.rows)
    {
        os << format_number(r.value);
        for (double v : r.values)
        {
            os << ',' << format_number(v);
        }
        os << ',' << format_number(r.diag.norm_drift) << ','
           << format_number(r.diag.boundary_probability) << ','
           << format_number(r.diag.dk_over_k) << ','
           << format_number(r.diag.points_per_wavelength) << ','
           << detail::join_flags(r.diag.flags) << '\n';
    }
}

inline nlohmann::ordered_json to_json(Table const& t)
{
    auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v))
        {
            return v;
        }
        return format_number(v);
    };
    nlohmann::ordered_json j;
    j["schema"] = table_schema;
    j["experiment"] = t.experiment;
    j["parameter"] = t.parameter;
    j["columns"] = t.columns;
    auto& summary = j["summary"] = nlohmann::ordered_json::object();
    for (auto const& [key, value] : t.summary)
    {
        summary[key] = num(value);
    }
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (auto const& r : t.rows)
    {
        nlohmann::ordered_json row;
        row[t.parameter] = num(r.value);
        for (std::size_t i = 0; i < t.columns.size(); ++i)
        {
            row[t.columns[i]] = num(r.values.at(i));
        }
        row["diagnostics"] = {{"norm_drift", num(r.diag.norm_drift)},
                              {"boundary_probability", num(r.diag.boundary_probability)},
                              {"dk_over_k", num(r.diag.dk_over_k)},
                              {"points_per_wavelength", num(r.diag.points_per_wavelength)},
                              {"flags", r.diag.flags}};
        rows.push_back(std::move(row));
    }
    return j;
}

inline void write_json(std::ostream& os, Table const& t)
{
    os << to_json(t).dump(2) << '\n';
}

//! Inverse of to_json; rejects documents with another schema.
inline Table table_from_json(nlohmann::json const& j)
{
    if (!j.is_object() || j.value("schema", std::string{}) != table_schema)
    {
        throw std::runtime_error(std::string("table_from_json: expected schema ") + table_schema);
    }
    auto num = [](nlohmann::json const& v) {
        if (v.is_string())
        {
            return std::stod(v.get<std::string>());
        }
        return v.get<double>();
    };
    Table t;
    t.experiment = j.at("experiment").get<std::string>();
    t.parameter = j.at("parameter").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (auto const& [key, value] : j.at("summary").items())
    {
        t.summary[key] = num(value);
    }
    for (auto const& r : j.at("rows"))
    {
        SweepRow row;
        row.value = num(r.at(t.parameter));
        for (auto const& c : t.columns)
        {
            row.values.push_back(num(r.at(c)));
        }
        auto const& d = r.at("diagnostics");
        row.diag.norm_drift = num(d.at("norm_drift"));
        row.diag.boundary_probability = num(d.at("boundary_probability"));
        row.diag.dk_over_k = num(d.at("dk_over_k"));
        row.diag.points_per_wavelength = num(d.at("points_per_wavelength"));
        row.diag.flags = d.at("flags").get<std::vector<std::string>>();
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace qorder::experiments
