#pragma once

#include <stdexcept>
#include <string>

namespace tritforge
{

/* Base class for every error raised by the library. */
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/* Malformed value, argument, or description (bad trit, width mismatch, ...). */
class invalid_value : public error
{
public:
  using error::error;
};

/* Structural problems found while elaborating a netlist. */
class elaboration_error : public error
{
public:
  using error::error;
};

/* Problems raised while a netlist is being simulated (e.g. driver contention). */
class simulation_error : public error
{
public:
  using error::error;
};

/* Unreadable or unparsable input files. */
class io_error : public error
{
public:
  using error::error;
};

} // namespace tritforge
