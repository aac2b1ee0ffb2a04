#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace globop {

enum class Status { pass, fail, error };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::error: return "ERROR";
    }
    return "?";
}

/// Outcome of one law check. A FAIL always carries a witness; an ERROR a message.
struct CheckReport {
    std::string name;
    Status status = Status::pass;
    std::size_t cases = 0;
    std::string witness;

    CheckReport() = default;
    explicit CheckReport(std::string n) : name(std::move(n)) {}

    bool passed() const { return status == Status::pass; }

    // first failure wins; later ones are dropped
    void fail(std::string w)
    {
        if (status == Status::pass) {
            status = Status::fail;
            witness = std::move(w);
        }
    }

    void error(std::string msg)
    {
        status = Status::error;
        witness = std::move(msg);
    }

    /// Folds a sub-report into this one, keeping the worst status.
    void absorb(const CheckReport& other)
    {
        cases += other.cases;
        if (other.status == Status::error && status != Status::error) {
            status = Status::error;
            witness = other.name + ": " + other.witness;
        } else if (other.status == Status::fail && status == Status::pass) {
            status = Status::fail;
            witness = other.name + ": " + other.witness;
        }
    }
};

} // namespace globop
