#include "moo/moo.hpp"

#include <catch2/catch_amalgamated.hpp>
