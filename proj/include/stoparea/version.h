#pragma once

#define STOPAREA_VERSION "0.1.0"
