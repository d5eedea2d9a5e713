export * from "./api.js";
export * from "./graphIndex.js";
export * from "./state.js";
export * from "./render.js";
export * from "./app.js";
