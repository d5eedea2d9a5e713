// Test service location and query date. The date matches the committed
// golden outputs so snapshot numbers line up with the fixture.
export const PORT = 7473;
export const BASE_URL = `http://127.0.0.1:${PORT}`;
export const AT = "2023-01-01";
