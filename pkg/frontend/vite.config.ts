import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  server: {
    // during development the dashboard talks to a locally running API
    proxy: {
      "/api": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    setupFiles: ["tests/setup.ts"],
  },
});
