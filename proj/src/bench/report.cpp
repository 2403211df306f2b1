// SPDX-License-Identifier: Apache-2.0
#include "tws/bench/report.hpp"

#include "tws/core/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tws::bench
{

namespace
{

double round4(double v)
{
    return std::round(v * 1e4) / 1e4;
}

std::string f4(double v)
{
    return fmt::format("{:.4f}", v);
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c: s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string joined(const std::map<std::string, double>& m)
{
    std::string out;
    for (const auto& [k, v]: m)
        out += (out.empty() ? "" : ";") + k + "=" + f4(v);
    return out;
}

std::string joined(const std::vector<std::string>& v, char sep = ';')
{
    std::string out;
    for (const auto& s: v)
        out += (out.empty() ? "" : std::string(1, sep)) + s;
    return out;
}

nlohmann::ordered_json rounded(const std::map<std::string, double>& m)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v]: m)
        j[k] = round4(v);
    return j;
}

class Output
{
  public:
    explicit Output(const std::filesystem::path& path) : _path(path), _out(path, std::ios::binary | std::ios::trunc)
    {
        if (!_out)
            throw WriteError("cannot write " + path.string());
    }
    ~Output() noexcept(false)
    {
        _out.flush();
        if (!_out && std::uncaught_exceptions() == 0)
            throw WriteError("failed writing " + _path.string());
    }
    std::ostream& operator*() { return _out; }

  private:
    std::filesystem::path _path;
    std::ofstream _out;
};

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFoundError(path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n)
    {
        if (line.empty())
            continue;
        try
        {
            out.push_back(nlohmann::json::parse(line));
        }
        catch (const nlohmann::json::exception& e)
        {
            throw DataError(fmt::format("{} line {}: {}", path.string(), n, e.what()));
        }
    }
    return out;
}

std::optional<engine::Emotion> label_or_null(const nlohmann::json& j)
{
    if (j.is_null())
        return std::nullopt;
    const auto e = engine::emotion_from_string(j.get<std::string>());
    if (!e)
        throw DataError("unknown label " + j.get<std::string>());
    return e;
}

} // namespace

ReportFormat report_format_from_string(std::string_view s)
{
    if (s == "csv")
        return ReportFormat::Csv;
    if (s == "jsonl")
        return ReportFormat::Jsonl;
    throw InvalidArgumentError("report format must be csv or jsonl, got " + std::string(s));
}

std::string_view extension(ReportFormat f) noexcept
{
    return f == ReportFormat::Csv ? ".csv" : ".jsonl";
}

nlohmann::ordered_json to_json(const EvalSummary& s)
{
    nlohmann::ordered_json j;
    j["mode"] = engine::to_string(s.mode);
    j["backend"] = s.backend_id;
    j["k_max"] = s.k_max;
    j["exclusions"] = s.exclusions;
    j["records"] = s.records;
    j["correct"] = s.correct;
    j["backend_errors"] = s.backend_errors;
    j["overall_accuracy"] = round4(s.overall_accuracy);
    j["mean_steps"] = round4(s.mean_steps);
    j["accuracy_by_kind"] = rounded(s.accuracy_by_kind);
    j["operator_usage"] = rounded(s.operator_usage);
    return j;
}

EvalSummary summary_from_json(const nlohmann::json& j)
{
    try
    {
        EvalSummary s;
        s.mode = engine::mode_from_string(j.at("mode").get<std::string>());
        s.backend_id = j.at("backend").get<std::string>();
        s.k_max = j.at("k_max").get<std::size_t>();
        s.exclusions = j.at("exclusions").get<std::vector<std::string>>();
        s.records = j.at("records").get<std::size_t>();
        s.correct = j.at("correct").get<std::size_t>();
        s.backend_errors = j.at("backend_errors").get<std::size_t>();
        s.overall_accuracy = j.at("overall_accuracy").get<double>();
        s.mean_steps = j.at("mean_steps").get<double>();
        s.accuracy_by_kind = j.at("accuracy_by_kind").get<std::map<std::string, double>>();
        s.operator_usage = j.at("operator_usage").get<std::map<std::string, double>>();
        return s;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed summary: ") + e.what());
    }
    catch (const InvalidArgumentError& e)
    {
        throw DataError(std::string("malformed summary: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const EvalRecordResult& r)
{
    nlohmann::ordered_json j;
    j["utterance_id"] = r.utterance_id;
    j["true_label"] = engine::to_string(r.true_label);
    j["predicted_label"] =
        r.predicted_label ? nlohmann::ordered_json(engine::to_string(*r.predicted_label)) : nlohmann::ordered_json();
    j["correct"] = r.correct;
    j["steps_used"] = r.steps_used;
    j["operators_invoked"] = r.operators_invoked;
    std::vector<std::string> kinds;
    for (auto k: r.perturbation_kinds)
        kinds.emplace_back(perturb::to_string(k));
    j["perturbation_kinds"] = kinds;
    j["terminated_by"] = engine::to_string(r.terminated_by);
    return j;
}

EvalRecordResult result_from_json(const nlohmann::json& j)
{
    try
    {
        EvalRecordResult r;
        r.utterance_id = j.at("utterance_id").get<std::string>();
        const auto truth = label_or_null(j.at("true_label"));
        if (!truth)
            throw DataError("record " + r.utterance_id + " has no true label");
        r.true_label = *truth;
        r.predicted_label = label_or_null(j.at("predicted_label"));
        r.correct = j.at("correct").get<bool>();
        r.steps_used = j.at("steps_used").get<std::size_t>();
        r.operators_invoked = j.at("operators_invoked").get<std::vector<std::string>>();
        for (const auto& k: j.at("perturbation_kinds"))
            r.perturbation_kinds.push_back(perturb::kind_from_string(k.get<std::string>()));
        r.terminated_by = engine::termination_from_string(j.at("terminated_by").get<std::string>());
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw DataError(std::string("malformed result: ") + e.what());
    }
    catch (const InvalidArgumentError& e)
    {
        throw DataError(std::string("malformed result: ") + e.what());
    }
}

void write_summaries(std::span<const EvalSummary> summaries, const std::filesystem::path& path, ReportFormat f)
{
    Output out(path);
    if (f == ReportFormat::Jsonl)
    {
        for (const auto& s: summaries)
            *out << to_json(s).dump() << '\n';
        return;
    }
    *out << "mode,backend,k_max,exclusions,records,correct,backend_errors,overall_accuracy,mean_steps,"
            "accuracy_by_kind,operator_usage\n";
    for (const auto& s: summaries)
        *out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", engine::to_string(s.mode), csv_field(s.backend_id),
                            s.k_max, csv_field(joined(s.exclusions)), s.records, s.correct, s.backend_errors,
                            f4(s.overall_accuracy), f4(s.mean_steps), csv_field(joined(s.accuracy_by_kind)),
                            csv_field(joined(s.operator_usage)));
}

void write_results(std::span<const EvalRecordResult> results, const std::filesystem::path& path, ReportFormat f)
{
    Output out(path);
    if (f == ReportFormat::Jsonl)
    {
        for (const auto& r: results)
            *out << to_json(r).dump() << '\n';
        return;
    }
    *out << "utterance_id,true_label,predicted_label,correct,steps_used,operators_invoked,perturbation_kinds,"
            "terminated_by\n";
    for (const auto& r: results)
    {
        std::vector<std::string> kinds;
        for (auto k: r.perturbation_kinds)
            kinds.emplace_back(perturb::to_string(k));
        *out << fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(r.utterance_id), engine::to_string(r.true_label),
                            r.predicted_label ? engine::to_string(*r.predicted_label) : "", r.correct ? 1 : 0,
                            r.steps_used, csv_field(joined(r.operators_invoked)), csv_field(joined(kinds)),
                            engine::to_string(r.terminated_by));
    }
}

void write_ablation(std::span<const AblationRow> rows, const std::filesystem::path& path, ReportFormat f)
{
    Output out(path);
    if (f == ReportFormat::Jsonl)
    {
        for (const auto& r: rows)
        {
            nlohmann::ordered_json j;
            j["row"] = r.name;
            j["accuracy"] = round4(r.summary.overall_accuracy);
            j["delta"] = round4(r.delta);
            j["summary"] = to_json(r.summary);
            *out << j.dump() << '\n';
        }
        return;
    }
    *out << "row,accuracy,delta,mean_steps,backend_errors\n";
    for (const auto& r: rows)
        *out << fmt::format("{},{},{},{},{}\n", csv_field(r.name), f4(r.summary.overall_accuracy), f4(r.delta),
                            f4(r.summary.mean_steps), r.summary.backend_errors);
}

void write_sweep(std::span<const SweepRow> rows, const std::filesystem::path& path, ReportFormat f)
{
    Output out(path);
    if (f == ReportFormat::Jsonl)
    {
        for (const auto& r: rows)
        {
            nlohmann::ordered_json j;
            j["k_max"] = r.k_max;
            j["accuracy"] = round4(r.accuracy);
            j["mean_steps"] = round4(r.mean_steps);
            j["mean_wall_time_ms"] = round4(r.mean_wall_time_ms);
            *out << j.dump() << '\n';
        }
        return;
    }
    *out << "k_max,accuracy,mean_steps,mean_wall_time_ms\n";
    for (const auto& r: rows)
        *out << fmt::format("{},{},{},{}\n", r.k_max, f4(r.accuracy), f4(r.mean_steps), f4(r.mean_wall_time_ms));
}

void write_breakdown(std::span<const BucketBreakdown> buckets, const std::filesystem::path& path, ReportFormat f)
{
    Output out(path);
    if (f == ReportFormat::Jsonl)
    {
        for (const auto& b: buckets)
        {
            nlohmann::ordered_json j;
            j["bucket"] = b.bucket;
            j["records"] = b.records;
            j["accuracy"] = round4(b.accuracy);
            j["steps"] = b.steps;
            j["operator_usage"] = rounded(b.operator_usage);
            *out << j.dump() << '\n';
        }
        return;
    }
    *out << "bucket,records,accuracy,steps,operator_usage\n";
    for (const auto& b: buckets)
        *out << fmt::format("{},{},{},{},{}\n", b.bucket, b.records, f4(b.accuracy), b.steps,
                            csv_field(joined(b.operator_usage)));
}

void write_timings(std::span<const EvalRecordResult> results, const std::filesystem::path& path)
{
    Output out(path);
    *out << "utterance_id,wall_time_ms\n";
    for (const auto& r: results)
        *out << fmt::format("{},{}\n", csv_field(r.utterance_id), f4(r.wall_time_ms));
}

std::vector<EvalSummary> read_summaries(const std::filesystem::path& jsonl)
{
    std::vector<EvalSummary> out;
    for (const auto& j: read_jsonl(jsonl))
        out.push_back(summary_from_json(j));
    return out;
}

std::vector<EvalRecordResult> read_results(const std::filesystem::path& jsonl)
{
    std::vector<EvalRecordResult> out;
    for (const auto& j: read_jsonl(jsonl))
        out.push_back(result_from_json(j));
    return out;
}

} // namespace tws::bench
