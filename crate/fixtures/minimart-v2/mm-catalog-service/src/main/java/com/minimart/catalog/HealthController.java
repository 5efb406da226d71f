package com.minimart.catalog;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.RestController;

@RestController
public class HealthController {

    @GetMapping("/api/v1/status/{component}")
    public String componentStatus(@PathVariable String component) {
        return "UP";
    }
}
