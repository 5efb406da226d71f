package com.minimart.catalog;

import java.util.Collections;
import java.util.List;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.RequestMapping;
import org.springframework.web.bind.annotation.RestController;

@RestController
@RequestMapping("/api/v1/catalog")
public class CatalogController {

    @GetMapping("/items")
    public List<ItemDto> items() {
        return Collections.emptyList();
    }

    @GetMapping("/items/{id}")
    public ItemDto item(@PathVariable String id) {
        ItemDto dto = new ItemDto();
        dto.setId(id);
        return dto;
    }
}
