#pragma once

#include "audit.hpp"
#include "canon.hpp"
#include "coloring.hpp"
#include "constructions.hpp"
#include "embed.hpp"
#include "enumerate.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "mono_scan.hpp"
#include "pattern.hpp"
#include "report.hpp"
#include "search.hpp"
#include "turan.hpp"
